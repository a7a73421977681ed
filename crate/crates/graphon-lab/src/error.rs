//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong, split by who is at fault.
///
/// The CLI maps [`Error::exit_code`] onto the process status: rejected input
/// exits 2, an internal assertion (an invariant the code itself promises)
/// exits 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Caller-supplied value outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Configuration file or flag set that cannot be validated.
    #[error("config error: {0}")]
    Config(String),

    /// The QL iteration exceeded its cap; carries the row it was reducing.
    #[error("eigensolver did not converge at row {row} after {iterations} iterations")]
    EigenNoConvergence { row: usize, iterations: usize },

    /// An invariant the implementation guarantees failed at run time.
    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status the CLI should report for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Config(_) | Error::Json(_) => 2,
            Error::EigenNoConvergence { .. } | Error::Internal(_) | Error::Io(_) => 1,
        }
    }
}

/// Shorthand for an [`Error::InvalidInput`] with a formatted message.
macro_rules! invalid_input {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidInput(format!($($arg)*))
    };
}
pub(crate) use invalid_input;
