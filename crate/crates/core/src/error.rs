use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading tables, validating inputs or reading corpora.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing table file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{file}:{line}: {reason}")]
    Malformed {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("empty sequence passed to {0}")]
    EmptySequence(&'static str),

    #[error("line {line}: malformed JSON: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("line {line}, sentence {id}: {reason}")]
    Ingest {
        line: usize,
        id: String,
        reason: String,
    },

    #[error("sentence {id}: {reason}")]
    Corpus { id: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
