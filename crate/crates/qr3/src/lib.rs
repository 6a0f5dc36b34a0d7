//! Exact-arithmetic toolkit for quadric equations of low-genus projective
//! curves.
//!
//! The library builds linearly normal embeddings of rational and elliptic
//! curves over ℚ or 𝔽ₚ, computes the space of quadrics through the image as
//! the kernel of the multiplication map on sections, and constructs
//! machine-checkable certificates that the homogeneous ideal is spanned —
//! and generated — by quadrics of rank 3. Everything runs over exact
//! fields; there is no floating point anywhere.
//!
//! The main entry points are [`build_certificate`], [`verify_certificate`],
//! [`quadric_space`], [`lemma22_check`], and [`oracle_rank3_span`].

pub mod binform;
pub mod certify;
pub mod curve;
pub mod error;
pub mod field;
pub mod ideal;
pub mod matrix;

pub use binform::{det_pencil, BinaryForm, P1Point};
pub use certify::{
    build_certificate, cone_pullback, lemma22_check, matrix_from_wire, matrix_to_wire,
    oracle_rank3_span, pencil_certificate, verify_certificate, HistogramEntry, LemmaReport,
    OracleReport, Qr3Certificate, TraceNode, VerificationReport, WireMatrix, ENGINE_VERSION,
};
pub use curve::{
    canonical_sections, sample_points, CurveModel, CurvePoint, PointSample, SectionElt,
    SectionSpace, MAX_DEGREE,
};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use ideal::{
    cubic_kernel_dim, expected_i2_dim, generated_in_degree_3, membership, quadric_space,
    singular_quartic_generators, vanishes_on_curve, Degree3Report, QuadraticForm, QuadricSpace,
};
pub use matrix::{Matrix, Span};
