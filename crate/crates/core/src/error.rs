use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate polygon at index {index}: area is zero")]
    DegeneratePolygon { index: usize },

    #[error("empty polygon set")]
    EmptySet,

    #[error("vertex count mismatch: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {left} variables vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("empty class {0:?}")]
    EmptyClass(String),

    #[error("class {class:?} has no observed values for variable {variable:?}")]
    EmptyClassForVariable { class: String, variable: String },

    #[error("unknown binary token {token:?} (expected {yes:?} or {no:?})")]
    UnknownToken { token: String, yes: String, no: String },

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("unknown unit {0:?}")]
    UnknownUnit(String),

    #[error("empty cluster")]
    EmptyCluster,

    #[error("empty list")]
    EmptyList,

    #[error("inconsistent partition: {0}")]
    InconsistentPartition(String),

    #[error("instance too large: {count} partitions exceed the limit of {limit}")]
    InstanceTooLarge { count: u128, limit: u128 },

    #[error("parse error at row {row}, column {column:?}: {message}")]
    Parse { row: usize, column: String, message: String },

    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
