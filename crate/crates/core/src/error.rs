use thiserror::Error;

/// Errors raised across the decomposition, generation and I/O layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A sample (or input vector) has norm at or below the zero threshold.
    #[error("zero state: sample {sample} has norm {norm:e}")]
    ZeroState { sample: usize, norm: f64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("unknown tree coordinate {0:?}")]
    UnknownCoord(String),

    #[error("coordinate {0:?} is not an internal node")]
    NotInternal(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("render error: {0}")]
    Render(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }
}
