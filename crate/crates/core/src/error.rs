use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation produced or received non-finite values.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A step or iteration budget was exhausted before completion.
    #[error("resource limit reached: {what} (progress {progress:.6} of {target:.6})")]
    Resource {
        what: String,
        progress: f64,
        target: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
