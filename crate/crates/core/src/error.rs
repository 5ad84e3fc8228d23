use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported activation `{name}`: {reason}")]
    UnsupportedActivation { name: String, reason: String },

    #[error("partition cache has no entry for canonical form ({key}); it was built for Q_max = {q_max}")]
    CacheMiss { key: String, q_max: u32 },

    #[error("partition cache for Q_max = {q_max} is too large (limit {limit})")]
    CacheTooLarge { q_max: u32, limit: u32 },

    #[error("term-count guard exceeded: {terms} terms (limit {limit})")]
    TermExplosion { terms: usize, limit: usize },

    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Divergence { epoch: usize, loss: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the failure indicates a bug rather than bad user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
