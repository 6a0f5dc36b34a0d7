//! Certificate decoding must never panic on arbitrary JSON (malformed
//! documents, dimension lies in WireMatrix headers, bogus scalars) and the
//! canonical serialization of anything it accepts must be a fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qr3::Qr3Certificate;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cert) = Qr3Certificate::from_json_str(s) {
        let canonical = cert.to_json_string();
        let again = Qr3Certificate::from_json_str(&canonical)
            .expect("canonical serialization must parse back");
        assert_eq!(
            canonical,
            again.to_json_string(),
            "canonical serialization is not a fixed point"
        );
    }
});
