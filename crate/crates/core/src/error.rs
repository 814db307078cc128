use thiserror::Error;

/// Errors raised by the numerical routines and the verification runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("singular point: {0}")]
    Singular(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("exponent error: {0}")]
    Exponent(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("fixture parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
