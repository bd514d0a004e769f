//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed XML at line {line}: {message}")]
    XmlParse { line: usize, message: String },

    #[error("trace starting at line {line} has no concept:name case identifier")]
    XesTraceWithoutId { line: usize },

    #[error("event in case {case} is missing mandatory attribute {attribute}")]
    XesEventAttribute { case: String, attribute: &'static str },

    #[error("column {name:?} not found in CSV header")]
    CsvColumn { name: String },

    #[error("CSV row {row}: {message}")]
    CsvRow { row: usize, message: String },

    #[error("unparseable timestamp {value:?} in case {case} (row/line {row})")]
    Timestamp {
        case: String,
        value: String,
        row: usize,
    },

    #[error("empty activity label in case {case} (row/line {row})")]
    EmptyActivity { case: String, row: usize },

    #[error("event log is empty")]
    EmptyLog,

    #[error("variant set is empty")]
    EmptyVariantSet,

    #[error("variant contains no activities")]
    EmptyVariant,

    #[error("case {case} has a variant that the automaton does not accept")]
    VariantNotAccepted { case: String },

    #[error("epsilon plan does not cover case {case}")]
    PlanMismatch { case: String },

    #[error("empty value group for prior estimation")]
    EmptyGroup,

    #[error("no event pairs to compare")]
    EmptyPairing,

    #[error("parameter {name} = {value} out of range; expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("cannot read {path}: {source}")]
    ReadInput {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    WriteOutput {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for unusable input, 2 for bad
    /// configuration or output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::XmlParse { .. }
            | Error::XesTraceWithoutId { .. }
            | Error::XesEventAttribute { .. }
            | Error::CsvColumn { .. }
            | Error::CsvRow { .. }
            | Error::Timestamp { .. }
            | Error::EmptyActivity { .. }
            | Error::EmptyLog
            | Error::ReadInput { .. } => 1,
            _ => 2,
        }
    }
}
