use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON at line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("missing label at line {line}")]
    MissingLabel { line: usize },

    #[error("unknown label code {code:?} at line {line}")]
    UnknownLabel { line: usize, code: String },

    #[error("invalid label code {0:?}")]
    InvalidLabel(String),

    #[error("duplicate document id {0:?}")]
    DuplicateId(String),

    #[error("document {0:?} has no label")]
    Unlabeled(String),

    #[error("empty vocabulary")]
    EmptyVocabulary,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite feature value {value} at example {example}")]
    NonFinite { example: usize, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("no views")]
    NoViews,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),

    #[error("model format error: {0}")]
    ModelFormat(String),

    #[error("model integrity error: {0}")]
    Integrity(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
