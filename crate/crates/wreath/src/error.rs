use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("non-finite value rejected: {0}")]
    NonFinite(String),

    #[error(
        "eigensolver failed to converge on a matrix of order {order} after {iterations} iterations"
    )]
    NonConvergence { order: usize, iterations: usize },

    #[error("reduced block {tuple:?}: {source}")]
    BlockEig {
        tuple: Vec<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn cap(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }
}
