use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("size limit exceeded: {0}")]
    Limit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Two independent computations of the same quantity disagreed.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) | Error::Limit(_) | Error::Unsupported(_) => 2,
            Error::CrossCheck(_) | Error::NoSolution(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
