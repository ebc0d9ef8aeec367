//! Batch experiment runner for coinwalk.
//!
//! A JSON spec ([`spec::ExperimentSpec`]) is executed by
//! [`run::run_experiment`] into [`row::ResultRow`]s, which [`emit`] writes as
//! CSV or JSON with a fixed column order ([`row::COLUMNS`]).

use std::path::PathBuf;

pub mod emit;
pub mod row;
pub mod run;
pub mod spec;

pub use row::{ResultRow, COLUMNS};
pub use run::{run_experiment, RunOptions};
pub use spec::{parse_spec, ExperimentSpec, Format, Kind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("spec parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid spec: {field}: {msg}")]
    Invalid { field: String, msg: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("write failed: {0}")]
    Write(String),
    #[error("no result rows to write")]
    EmptyRows,
    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Invalid { .. } => EXIT_INVALID,
            CliError::Io { .. } | CliError::Write(_) | CliError::EmptyRows | CliError::Pool(_) => EXIT_IO,
        }
    }
}
