use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("ad({0}) is not nilpotent")]
    NonNilpotentAd(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
