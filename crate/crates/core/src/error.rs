use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A result left the representable floating-point range.
    #[error("value out of representable range: {0}")]
    Range(String),

    /// Operands live in different ambient dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An input violates a structural contract (e.g. a non-harmonic
    /// polynomial passed to an operation defined only on harmonic ones).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative search exhausted its budget before succeeding.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An orbit horizon reaches past the faithful range of a truncation.
    #[error("horizon {horizon} exceeds truncation cap {cap} and no tail bound was supplied")]
    HorizonExceedsCap { horizon: usize, cap: usize },

    /// A linear system had no solution.
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
