use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("factor label `{0}` appears in both operands")]
    LabelCollision(String),

    #[error("unknown factor label `{0}`")]
    UnknownLabel(String),

    #[error("invalid tensor space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not a valid density operator: {0}")]
    NotDensity(String),

    #[error("Hermitian eigensolver failed on a {dim}x{dim} matrix")]
    Eigensolver { dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation did not converge: {0}")]
    NonConvergence(String),

    #[error("negativity methods disagree by {residual:e} (tolerance {tolerance:e})")]
    MethodDisagreement { residual: f64, tolerance: f64 },

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("special function evaluation failed: {0}")]
    SpecialFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
