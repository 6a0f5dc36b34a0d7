//! Point parsing ("(s:t)", "(x,y)", "inf") must never panic; parameter-line
//! points are normalized at construction, so the display form must parse
//! back to the identical point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qr3::{CurvePoint, FieldSpec};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    for field in [FieldSpec::Rationals, FieldSpec::prime(13).unwrap()] {
        if let Ok(pt) = CurvePoint::parse(s, field) {
            let again = CurvePoint::parse(&pt.to_string(), field).expect("round trip parses");
            assert_eq!(pt, again, "display round trip changed the point");
        }
    }
});
