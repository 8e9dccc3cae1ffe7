use thiserror::Error;

/// Errors returned by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The requested enumeration or sweep is larger than the configured cap.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// An internal cross-check failed. This always indicates a bug.
    #[error("consistency failure: {0}")]
    Consistency(String),
    /// Malformed input file or string.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidParameter(format!($($arg)*))
    };
}
pub(crate) use invalid;
