use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),

    #[error("document {doc_id}: {message}")]
    MissingScores { doc_id: String, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("unresolved document ids: {}", .0.join(", "))]
    UnresolvedIds(Vec<String>),

    #[error("checkpoint {path}: {message}")]
    Checkpoint { path: PathBuf, message: String },

    #[error("non-finite loss at step {step} (document {doc_index}): L={loss} L1={l1} L2={l2}")]
    NonFiniteLoss {
        step: usize,
        doc_index: usize,
        loss: f64,
        l1: f64,
        l2: f64,
    },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for bad input or configuration, 2 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFiniteLoss { .. } | Error::Serde(_) | Error::Csv(_) => 2,
            _ => 1,
        }
    }
}
