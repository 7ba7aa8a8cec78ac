use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments, shapes, or file contents.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative routine failed to converge or produced inconsistent
    /// output.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A dense representation would exceed the memory guard.
    #[error("problem too large: {0}")]
    TooLarge(String),

    /// An MPS whose bond dimensions or spectra do not fit together.
    #[error("corrupt MPS: {0}")]
    CorruptMps(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
