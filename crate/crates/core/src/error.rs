use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("text contains no words")]
    EmptyText,

    #[error("corpus root {0} does not exist or is not a directory")]
    MissingRoot(PathBuf),

    #[error("corpus contains no tokenizable text")]
    EmptyCorpus,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed dictionary line")]
    Format { path: PathBuf, line: usize },

    #[error("{path}:{line}: duplicate word {word:?}")]
    DuplicateWord {
        path: PathBuf,
        line: usize,
        word: String,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid partition parameters: {0}")]
    InvalidScheme(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training set is empty")]
    EmptyTraining,

    #[error("training set contains a single class")]
    SingleClass,

    #[error("style vectors mix partition schemes or ODV modes")]
    MixedConfig,

    #[error("vector configuration does not match the model")]
    ConfigMismatch,

    #[error("test set is empty")]
    EmptyTestSet,

    #[error("unknown author {0:?}")]
    UnknownAuthor(String),

    #[error("document {0:?} has no author label")]
    UnlabeledDocument(String),

    #[error("long text produced no segments")]
    NoSegments,

    #[error("no result rows to emit")]
    EmptyResults,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
