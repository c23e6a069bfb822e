//! Tabular datasets: representation, CSV ingestion, preprocessing and folds.

mod dataset;
mod folds;
mod io;
mod preprocess;

pub use dataset::{Column, ColumnData, ColumnKind, Dataset};
pub use folds::{random_folds, stratified_folds, FoldAssignment};
pub use io::{load_csv, parse_csv, KindHints};
pub use preprocess::{impute, scale, Imputer, Scaler};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TabularError {
    #[error("target column `{0}` not found")]
    MissingTarget(String),
    #[error("target value `{value}` on data row {row} is not 0 or 1")]
    NonBinaryTarget { row: usize, value: String },
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("column `{column}` has {got} entries, expected {expected}")]
    LengthMismatch {
        column: String,
        got: usize,
        expected: usize,
    },
    #[error("column `{0}` has no non-missing values in the training view")]
    AllMissingColumn(String),
    #[error("class {class} has {count} members, fewer than the {k} folds requested")]
    TooFewClassMembers { class: u8, count: usize, k: usize },
    #[error("fold count must be at least 2, got {0}")]
    InvalidFoldCount(usize),
    #[error("csv: {0}")]
    Csv(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, TabularError>;
