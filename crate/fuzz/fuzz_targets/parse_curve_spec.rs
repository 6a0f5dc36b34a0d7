//! Curve specification parsing ("rnc:<d>", "elliptic:a=..,b=..,d=..",
//! "nodal4", "cusp4") must never panic and must reject degrees past the
//! hard ceiling instead of attempting to allocate for them.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qr3::{CurveModel, FieldSpec, MAX_DEGREE};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    for field in [FieldSpec::Rationals, FieldSpec::prime(13).unwrap()] {
        if let Ok(m) = CurveModel::parse(s, field) {
            assert!(m.degree() <= MAX_DEGREE, "accepted an oversized degree");
            assert!(m.embedding_dim() >= 3, "accepted a sub-threshold model");
            m.validate(field).expect("parse returned an invalid model");
        }
    }
});
