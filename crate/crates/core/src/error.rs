use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A dataset failed a structural requirement (shape, rank, positivity).
    #[error("invalid data: {0}")]
    InvalidData(String),
    /// A computation left the range representable in finite f64 arithmetic.
    #[error("numerical overflow: {0}")]
    Overflow(String),
    /// A configuration value is unusable (negative counts, empty grids, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
