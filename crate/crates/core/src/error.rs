use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error in {code}: {msg}")]
    Parse { code: String, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("series is not geometrically convergent: {0}")]
    NonConvergent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(code: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            code: code.into(),
            msg: msg.into(),
        }
    }
}
