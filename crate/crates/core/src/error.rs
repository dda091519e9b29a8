use thiserror::Error;

/// Errors raised while building, converting or verifying designs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{count} vectors cannot form a basis of a space of dimension {dim}")]
    BasisCount { count: usize, dim: usize },

    #[error("dimension {dim} is not a power of the local dimension {local_dim}")]
    NotAPower { dim: usize, local_dim: usize },

    #[error("invalid party split: {0}")]
    InvalidSplit(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(usize),

    #[error("field order {0} exceeds the supported ceiling of 64")]
    FieldTooLarge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed design: {0}")]
    Malformed(String),

    #[error("hole mismatch: {0}")]
    HoleMismatch(String),

    #[error("input verification failed: {0}")]
    VerificationFailed(String),

    #[error("matrix is not unitary: {0}")]
    NotUnitary(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
