use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input violates an operational precondition (under-resolved grid, wrong kind, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("value out of representable range at multi-index {alpha:?}: {msg}")]
    Range { alpha: Vec<usize>, msg: String },

    /// A statistical fit could not be carried out on the supplied data.
    #[error("inference error: {0}")]
    Inference(String),

    /// Weighted values are still increasing at the edge of the sampled region.
    #[error("coverage error{}: {msg}", t.as_ref().map(|t| format!(" at order t = {t:?}")).unwrap_or_default())]
    Coverage { t: Option<Vec<f64>>, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn inference(msg: impl Into<String>) -> Self {
        Error::Inference(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
