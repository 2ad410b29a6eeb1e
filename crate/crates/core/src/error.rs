use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("embedding is not connected ({components} components)")]
    NotConnected { components: usize },

    #[error("embedding inconsistency: {0}")]
    Inconsistent(String),

    #[error("walk is not a cycle: {0}")]
    NotACycle(String),

    #[error("natural partition undefined: {0}")]
    PartitionUndefined(String),

    #[error("instance has {actual} free vertices, exceeding the oracle cap of {limit}")]
    SizeGuard { limit: usize, actual: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("collar is not uniquely {k}-determined: {witness}")]
    NotDetermined { k: usize, witness: String },

    #[error("search exhausted at stage `{stage}`: {detail}")]
    SearchExhausted { stage: String, detail: String },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), msg: e.to_string() }
    }
}
