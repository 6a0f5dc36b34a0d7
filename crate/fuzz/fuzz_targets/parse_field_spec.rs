//! Field specification parsing ("Q", "Fp:<p>") must never panic; accepted
//! specs must round trip through their display form.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qr3::FieldSpec;

fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = FieldSpec::parse(s) {
        let again = FieldSpec::parse(&f.to_string()).expect("round trip parses");
        assert_eq!(f, again);
        if let FieldSpec::Prime(p) = f {
            assert!(p % 2 == 1 && p > 2, "accepted a non-odd-prime field");
        }
    }
});
