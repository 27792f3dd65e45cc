use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested conditional event has probability zero.
    #[error("zero-probability event: {0}")]
    ZeroProbability(String),
    /// A series or iteration failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// An argument is valid mathematically but outside the supported range.
    #[error("range error: {0}")]
    Range(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn zero_probability(msg: impl Into<String>) -> Self {
        Error::ZeroProbability(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
