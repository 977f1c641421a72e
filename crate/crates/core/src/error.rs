use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size limit exceeded: {what} = {requested} exceeds cap {cap}")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("moment sequence is not that of a positive measure (Jacobi index {index})")]
    NotAMeasure { index: usize },
    #[error("insufficient depth: need {needed}, have {available}")]
    InsufficientDepth { needed: usize, available: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
