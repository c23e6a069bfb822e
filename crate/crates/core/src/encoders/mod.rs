//! Categorical encoders.
//!
//! Every encoder is a fit/transform pair: [`FittedEncoder::fit`] learns a
//! level table from training rows and returns the training encoding (which
//! differs from the transform path for the data-constraining families), and
//! [`FittedEncoder::transform`] encodes any rows, including unseen levels.
//!
//! Level indices passed to the single-level helpers ([`identifier_encode`],
//! [`contrast_encode`]) are 1-based, matching the usual notation `l ∈ 1..=κ`.
//! Everything else works with 0-based indices into the training domain, whose
//! order is first appearance in the training rows.

mod binning;
mod constrained;
mod contrast;
mod dataset;
mod fitted;
mod frequency;
mod glmm;
mod identifier;
mod minhash;
mod spec;
mod target;

pub use binning::{prebin_partition, BinPartition};
pub use constrained::{
    blowup_tables, catboost_table, catboost_train_values, cv_train_values, TargetBase,
};
pub use contrast::{contrast_encode, ContrastScheme};
pub use dataset::{encode_dataset, DatasetEncoder};
pub use fitted::{Domain, FittedEncoder};
pub use frequency::{frequency_encode, FrequencyMode};
pub use glmm::{glmm_fit, GlmmFit};
pub use identifier::{identifier_encode, IdentifierScheme};
pub use minhash::{
    gram_jaccard, minhash_encode, MinHasher, DEFAULT_GRAM, DEFAULT_MINHASH_COMPONENTS, MINHASH_SEED,
};
pub use spec::{EncoderSpec, Family};
pub use target::{
    discretize_mt, mean_estimate_table, mean_target_table, woe_table, LevelStats, LevelTable,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncoderError {
    #[error("level index {level} outside 1..={cardinality}")]
    LevelOutOfRange { level: usize, cardinality: usize },
    #[error("contrast coding needs at least two levels")]
    DegenerateCardinality,
    #[error("cannot min-hash an empty string")]
    EmptyString,
    #[error("random-intercept fit diverged: {0}")]
    FitDiverged(String),
    #[error("invalid encoder parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown encoder `{0}`")]
    UnknownEncoder(String),
    #[error("supervised encoder requires the training target")]
    MissingTarget,
    #[error("numerical column `{0}` still has missing values")]
    MissingValue(String),
}

pub type Result<T> = std::result::Result<T, EncoderError>;
