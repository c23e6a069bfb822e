//! Sensitivity, replicability and tuning-gain analysis over completed
//! evaluation grids.

mod bootstrap;
mod grid;
mod replicability;
mod sensitivity;
mod similarity;
mod tuning_gain;

pub use bootstrap::percentile_bootstrap;
pub use grid::{synthetic_grid, Combo, QualityGrid};
pub use replicability::{
    replicability_curve, CurvePoint, ReplicabilityCurve, ReplicabilityOptions,
};
pub use sensitivity::{sensitivity_matrix, Factor, SimilarityReport};
pub use similarity::{jaccard_best, spearman_with_ties, Spearman};
pub use tuning_gain::{tuning_gain, GainSummary, TuningDelta, TuningGain};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("fewer than two encoders ranked in both orders")]
    TooFewCommon,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("need {needed} datasets for disjoint samples, have {available}")]
    NotEnoughDatasets { needed: usize, available: usize },
    #[error("the two tuning strategies share no completed factor combination")]
    NoSharedFactors,
    #[error(transparent)]
    Aggregation(#[from] crate::aggregation::AggregationError),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
