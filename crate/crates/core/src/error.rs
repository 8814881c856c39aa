use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the clustering pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: row {row}, column {column}: cannot parse {value:?} as a number")]
    BadCell {
        path: PathBuf,
        row: usize,
        column: usize,
        value: String,
    },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("graph is disconnected ({components} components); the proximity graph is missing MST edges")]
    Disconnected { components: usize },

    #[error("instance too large for the brute-force oracle: n = {n}, limit = {limit}")]
    OracleGuard { n: usize, limit: usize },

    #[error("time limit of {0:?} exceeded")]
    Timeout(std::time::Duration),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
