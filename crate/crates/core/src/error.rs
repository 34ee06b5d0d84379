use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (rationals, config files, checkpoint files).
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally invalid argument (bad dimensions, violated preconditions).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A configured resource guard (node budget, wall-clock budget, size cap)
    /// was exceeded before the computation finished.
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
