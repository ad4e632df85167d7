use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymbaError {
    #[error("gene value {value} is invalid for a grid of length {len} (must be nonzero with |value| < length)")]
    InvalidGene { value: i64, len: usize },

    #[error("grid length {0} is too small")]
    InvalidLength(usize),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid initial condition: {0}")]
    InvalidSeed(String),

    #[error("invalid norm map: {0}")]
    InvalidNormMap(String),

    #[error("unknown norm `{0}` (expected one of zero, a, b, c, d)")]
    UnknownNorm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SymbaError>;
