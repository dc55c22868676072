use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A spectrum document failed schema validation.
    #[error("schema error: {0}")]
    Schema(String),

    /// Parameters are individually valid but jointly inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// An iterative method did not reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A proven inequality was violated by a computed quantity.
    #[error("bound violated: {0}")]
    BoundViolation(String),

    /// An internal consistency check failed; indicates a construction bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
