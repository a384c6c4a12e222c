use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed record at byte offset {offset}: {message}")]
    Malformed { offset: u64, message: String },

    #[error("invalid language code {0:?}")]
    InvalidLanguage(String),

    #[error("language {0} is not in the configured language set")]
    UnconfiguredLanguage(String),

    #[error("no time-title rules configured for language {0}")]
    MissingTimeRules(String),

    #[error("duplicate article id {id} in language {lang}")]
    DuplicateId { lang: String, id: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty selection: {0}")]
    EmptySelection(String),

    #[error("not enough qualifying items: needed {needed}, found {available} ({what})")]
    Insufficient {
        what: String,
        needed: usize,
        available: usize,
    },

    #[error("empty vocabulary: every term has zero inverse document frequency")]
    EmptyVocabulary,

    #[error("zero variance in {0}")]
    ZeroVariance(String),

    #[error("missing index for language {0}")]
    MissingIndex(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported file format: {0}")]
    Format(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
