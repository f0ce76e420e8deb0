use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: document {position} is not valid UTF-8")]
    Decode { path: PathBuf, position: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("weighted term-document matrix has no nonzero entries")]
    ZeroMatrix,

    #[error("word not in vocabulary: {0:?}")]
    OutOfVocabulary(String),

    #[error("word {0:?} has an all-zero vector; cosine queries against it are undefined")]
    DeadWord(String),

    #[error("required word absent from the full corpus: {0:?}")]
    MissingRequiredWord(String),

    #[error("invalid statistics input: {0}")]
    Stats(String),

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("malformed embedding file: {0}")]
    EmbeddingFormat(String),

    #[error("ground truth: {0}")]
    GroundTruth(String),

    /// Wraps an error from one sweep or experiment cell with its coordinates,
    /// so a failing grid job can be located without re-running the grid.
    #[error("{context}: {source}")]
    Cell {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_cell(self, context: impl Into<String>) -> Self {
        Error::Cell {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
