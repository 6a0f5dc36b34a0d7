use thiserror::Error;

/// Everything that can go wrong, split roughly into input errors,
/// precondition violations, and mathematical diagnostics. The last group
/// (`is_math_diagnostic`) is reportable data rather than a bug: over a
/// non-closed field the constructions can fail for rationality reasons.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("mixed-field arithmetic: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric")]
    NonSymmetric,

    #[error("zero form has no well-defined roots")]
    ZeroForm,

    #[error("degree too small: {0}")]
    DegreeTooSmall(String),

    #[error("evaluation at the point at infinity is not supported")]
    PointAtInfinity,

    #[error("point does not lie on the curve: {0}")]
    PointNotOnCurve(String),

    #[error("point is the singular point of the model: {0}")]
    SingularPoint(String),

    #[error("subtraction would drop the section space below dimension 3 (dim {dim})")]
    DimensionFloor { dim: usize },

    #[error("operation requires a singular quartic model")]
    WrongModel,

    #[error("quadric space is not a pencil: dimension {dim} != 2")]
    NotAPencil { dim: usize },

    /// The determinant quartic of a pencil had fewer than two distinct
    /// rational roots over the working field. Retrying over a different
    /// prime (CLI `--primes`) often succeeds.
    #[error("pencil determinant has {found} rational root(s), need 2{}",
            at_point.as_ref().map(|p| format!(" (pencil at subtracted point {p})")).unwrap_or_default())]
    InsufficientRationalRoots {
        found: usize,
        at_point: Option<String>,
    },

    #[error("pencil root {root} gives a quadric of rank {rank}, expected 3 (degenerate pencil)")]
    UnexpectedRank { rank: usize, root: String },

    /// The three-cone union failed to span the quadric space. The full
    /// dimension ledger is carried because over a small field this is
    /// mathematically informative.
    #[error("cone union spans {got} of {want} dimensions (pair spans: {pair_dims:?}, ambient section dim {space_dim})")]
    SpanningFailure {
        got: usize,
        want: usize,
        pair_dims: Vec<usize>,
        space_dim: usize,
    },

    #[error("need {needed} distinct usable points, only {available} available")]
    InsufficientPoints { needed: usize, available: usize },

    /// A pulled-back quadric failed membership in the parent ideal.
    /// This is an internal assertion failure, never silently ignored.
    #[error("cone pullback is not a member of the parent quadric space")]
    InclusionMismatch,

    #[error("the two points must be distinct")]
    PointsNotDistinct,

    #[error("projective enumeration of {classes} classes exceeds cap {cap}")]
    CapExceeded { classes: u128, cap: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for failures that are mathematical findings over the working
    /// field (CLI exit code 2) rather than usage or internal errors.
    pub fn is_math_diagnostic(&self) -> bool {
        matches!(
            self,
            Error::InsufficientRationalRoots { .. }
                | Error::SpanningFailure { .. }
                | Error::InsufficientPoints { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
