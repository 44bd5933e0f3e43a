use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A document could not be decoded; `path` points at the offending field.
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    /// A caller broke an operation's precondition.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("variant mismatch: {0}")]
    VariantMismatch(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("exact search limited to {limit} candidate targets, got {got}")]
    ExactLimit { limit: usize, got: usize },

    #[error("oracle limits exceeded: {0}")]
    OracleLimit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}
