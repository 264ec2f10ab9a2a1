use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("malformed basis family: {0}")]
    MalformedFamily(String),
    #[error(
        "leading coefficient did not stabilize (window {first} vs {second}); increase h0 or P"
    )]
    Unstable { first: String, second: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty support: the zero divisor has no weighted order")]
    EmptySupport,
    #[error("wrong singularity class: {0}")]
    WrongClass(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("count overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
