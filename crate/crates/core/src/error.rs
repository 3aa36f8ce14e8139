use thiserror::Error;

/// Errors raised by the enclosure engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters fall outside the region where a bound or operation applies.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration cap was hit before the requested width was reached.
    #[error("precision unreachable: {0}")]
    PrecisionUnreachable(String),

    /// An exact computation would exceed its configured size limit.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// Malformed textual input.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
