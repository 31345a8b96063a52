use thiserror::Error;

/// Errors produced by transform construction, propagation, and observable
/// evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid coin parameters: {0}")]
    InvalidCoin(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("numerical overflow: {0}")]
    Overflow(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
