use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("refused: {0}")]
    GuardExceeded(String),

    #[error("audit failure: {0}")]
    AuditFailure(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn invalid_state<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidState(msg.into()))
}
