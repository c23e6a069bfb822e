//! Experiment grids, the append-only evaluation store, consensus output and
//! report files.

mod aggregate;
mod config;
mod report;
mod runner;
mod store;
mod svg;
mod toy;

pub use aggregate::{aggregate, write_consensus, ConsensusSet, FactorFilter};
pub use config::{DatasetSource, ExperimentConfig, WORKERS_ENV};
pub use report::{report, ReportKind, ReportOutput};
pub use runner::{load_datasets, run, RunSummary};
pub use store::{EvaluationStore, RecordKey, STORE_FILE};
pub use toy::{toy_datasets, write_toy_datasets, ToyDataset, TOY_SEED};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed store line {line}: {message}")]
    Store { line: usize, message: String },
    #[error("no evaluations match the filter {0}")]
    EmptyFilter(String),
    #[error("{strategy} supports at most {cap} encoders but the store has {n}; restrict the encoders or pick a heuristic strategy")]
    TooManyAlternatives {
        strategy: String,
        n: usize,
        cap: usize,
    },
    #[error("cannot produce the {kind} report: {reason}")]
    MissingPrerequisite { kind: String, reason: String },
    #[error(transparent)]
    Tabular(#[from] crate::tabular::TabularError),
    #[error(transparent)]
    Aggregation(#[from] crate::aggregation::AggregationError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
}

pub type Result<T> = std::result::Result<T, BenchError>;

pub(crate) fn io_err(path: &std::path::Path, e: impl std::fmt::Display) -> BenchError {
    BenchError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Writes `contents` to `dir/name`, creating `dir` when needed.
pub(crate) fn write_file(
    dir: &std::path::Path,
    name: &str,
    contents: &str,
) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
    Ok(path)
}
