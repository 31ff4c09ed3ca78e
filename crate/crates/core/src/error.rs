use num_complex::Complex64;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two objects that must agree in dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A cluster update was requested for a cluster with no members.
    #[error("empty cluster")]
    EmptyCluster,

    /// An iterative solver stopped before meeting its tolerance. The last
    /// iterate is carried so callers can inspect or salvage it.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
        eigenvalue: f64,
        last_iterate: Vec<Complex64>,
    },

    /// A problem instance is larger than an operation is willing to handle.
    #[error("problem size {got} exceeds the supported limit {limit}")]
    SizeLimit { limit: usize, got: usize },

    /// A text input could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A file carries an unsupported format version or kind token.
    #[error("unsupported format: {0}")]
    Version(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for [`Error::InvalidArgument`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Shorthand for [`Error::Parse`] with a 1-based line number.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
