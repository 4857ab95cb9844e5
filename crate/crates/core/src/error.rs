use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("site mismatch: {0}")]
    SiteMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("truncation too low: need dimension {needed}, have {available}")]
    TruncationTooLow { needed: usize, available: usize },

    #[error("malformed presheaf: {0}")]
    MalformedPresheaf(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("malformed lifting problem: {0}")]
    MalformedSquare(String),

    #[error("graph error: {0}")]
    Graph(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
