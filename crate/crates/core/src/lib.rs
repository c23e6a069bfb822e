//! Benchmarking toolkit for categorical encoders.
//!
//! The crate is organised in the order data flows through a benchmark:
//!
//! - [`tabular`]: datasets, CSV ingestion, imputation, scaling and stratified folds.
//! - [`encoders`]: the full encoder taxonomy as fit/transform pairs.
//! - [`models`]: decision tree, k-NN and logistic regression learners, quality
//!   metrics, and the cross-validated evaluation pipeline with its tuning strategies.
//! - [`aggregation`]: per-dataset rankings and consensus rankings (heuristics,
//!   Friedman/Nemenyi, exact Kemeny-Young).
//! - [`analysis`]: sensitivity, replicability and tuning-gain analysis.
//! - [`bench`]: experiment grids, the append-only evaluation store and report files.

pub mod aggregation;
pub mod analysis;
pub mod bench;
pub mod encoders;
pub mod matrix;
pub mod models;
pub mod tabular;

mod util;

pub use matrix::Matrix;
