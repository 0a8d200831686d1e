use thiserror::Error;

/// Errors raised by the numerical core and the command-line layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A series could not be built from the supplied coefficients.
    #[error("invalid series: {0}")]
    Construction(String),
    /// A point or parameter lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A symbol description violates its invariants.
    #[error("invalid symbol: {0}")]
    Spec(String),
    /// An operation was called without its precondition holding.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An eigen or singular value solver did not converge.
    #[error("numerical failure: {0}")]
    Computation(String),
    /// Bad configuration or unknown identifiers.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
