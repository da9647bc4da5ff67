use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the range an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computed object failed its own validation; this is a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
