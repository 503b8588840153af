//! Crate-wide error type.

/// Errors surfaced by the library. Numerical *warnings* (squeezing-parameter
/// breakdown, entropy divergence) are not errors; they travel as flags on the
/// result types so callers can decide how strict to be.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested computation would exceed a hard resource bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An iterative solver failed to reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Run configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
