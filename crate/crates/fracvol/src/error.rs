use thiserror::Error;

/// Toolkit-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two inputs are defined on incompatible grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A numerical procedure failed (embedding, factorization, bracketing).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Input carries no usable signal (constant series, zero variance).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Configuration or input-file problem; maps to exit code 2 in the CLI.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
