use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Schema or instance shape violation.
    #[error("schema error: {0}")]
    Schema(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("non-finite parameter in layer {layer}")]
    NonFinite { layer: usize },

    #[error("failed to parse {what}: {message}")]
    Parse { what: String, message: String },

    /// The logit is too close to the decision boundary to reason about soundly.
    #[error("ambiguous decision: |logit| = {logit:e} is below the ambiguity margin")]
    Ambiguous { logit: f64 },

    #[error("record {record}: {message}")]
    Ingest { record: usize, message: String },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("{free} free features exceed the enumeration cap of {cap}")]
    EnumerationCap { free: usize, cap: usize },

    #[error("explanation failed verification: {0}")]
    InvalidExplanation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(what: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            what: what.into(),
            message: message.to_string(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::parse("delimited file", e)
    }
}
