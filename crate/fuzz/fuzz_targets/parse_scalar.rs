//! Scalar text parsing over both field kinds must never panic, and
//! anything accepted must survive a display round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qr3::{FieldSpec, Scalar};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    for field in [FieldSpec::Rationals, FieldSpec::prime(13).unwrap()] {
        if let Ok(v) = Scalar::parse(s, field) {
            let again = Scalar::parse(&v.to_string(), field).expect("round trip parses");
            assert_eq!(v, again, "display round trip changed the value");
        }
    }
});
