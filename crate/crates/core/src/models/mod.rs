//! Downstream learners, quality metrics and the cross-validated evaluation
//! pipeline with its three tuning strategies.

mod knn;
mod learner;
mod logreg;
mod metrics;
mod pipeline;
mod search;
mod spec;
mod tree;

pub use knn::Knn;
pub use learner::{predict_score, train, FittedModel};
pub use logreg::LogisticRegression;
pub use metrics::compute_metric;
pub use pipeline::{evaluate_pipeline, EvaluationRecord, PipelineOptions, Reason};
pub use search::{grid_search, interval_search, SearchSpace};
pub use spec::{MetricKind, ModelFamily, ModelSpec, Tuning, TuningSpec};
pub use tree::DecisionTree;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("feature width {got} differs from training width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("{0} rows of features but {1} targets")]
    LengthMismatch(usize, usize),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("non-finite value in feature matrix")]
    NonFinite,
    #[error("numerical failure while fitting: {0}")]
    SingularFit(String),
    #[error("{0} is undefined when only one class is present")]
    UndefinedMetric(MetricKind),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, ModelError>;
