//! Per-dataset rankings and consensus rankings.
//!
//! Qualities are ranked separately per dataset (higher quality, smaller
//! rank; ties share the average rank) and then aggregated across datasets by
//! heuristic scores, Friedman/Nemenyi tests or exact Kemeny-Young.

mod consensus;
mod friedman;
mod heuristics;
mod kemeny;
mod quality;
mod ranking;

pub use consensus::{consensus, ConsensusResult, Strategy};
pub use friedman::{
    friedman_test, nemenyi_cd, nemenyi_consensus, nemenyi_q, studentized_range_quantile,
    FriedmanResult,
};
pub use heuristics::{heuristic_consensus, heuristic_scores};
pub use kemeny::{
    kemeny_brute_force, kemeny_consensus, kemeny_cost, kemeny_exact, KemenyCost, KemenySolution,
    DEFAULT_KEMENY_CAP,
};
pub use quality::QualityTable;
pub use ranking::{rank_from_qualities, RankingMatrix, WeakOrder};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AggregationError {
    #[error("no non-missing quality in column")]
    EmptyColumn,
    #[error("quality table shape mismatch: {0}")]
    Shape(String),
    #[error(
        "the Friedman test needs at least two datasets and two encoders ranked on all of them"
    )]
    TooSmall,
    #[error("{n} encoders exceed the exact Kemeny solver cap of {cap}; use a heuristic strategy or raise the cap")]
    TooManyAlternatives { n: usize, cap: usize },
    #[error("unknown aggregation strategy `{0}`")]
    UnknownStrategy(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, AggregationError>;
