use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelFamily {
    #[serde(rename = "DT")]
    DecisionTree,
    #[serde(rename = "kNN")]
    Knn,
    #[serde(rename = "LogReg")]
    LogReg,
}

/// A learner with concrete hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    /// `None` grows the tree until leaves are pure or unsplittable.
    DecisionTree {
        max_depth: Option<usize>,
    },
    Knn {
        n_neighbors: usize,
    },
    /// Inverse regularization strength; `0` disables the penalty.
    LogReg {
        c: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    Acc,
    BAcc,
    F1,
    AUC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tuning {
    NoTuning,
    ModelTuning,
    FullTuning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuningSpec {
    pub strategy: Tuning,
    #[serde(default = "default_inner_folds")]
    pub inner_folds: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_inner_folds() -> usize {
    3
}

fn default_budget() -> usize {
    25
}

impl TuningSpec {
    pub fn new(strategy: Tuning) -> Self {
        TuningSpec {
            strategy,
            inner_folds: default_inner_folds(),
            budget: default_budget(),
        }
    }
}

impl From<Tuning> for TuningSpec {
    fn from(strategy: Tuning) -> Self {
        TuningSpec::new(strategy)
    }
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 3] = [
        ModelFamily::DecisionTree,
        ModelFamily::Knn,
        ModelFamily::LogReg,
    ];

    /// Hyperparameters used without tuning.
    pub fn default_spec(self) -> ModelSpec {
        match self {
            ModelFamily::DecisionTree => ModelSpec::DecisionTree { max_depth: None },
            ModelFamily::Knn => ModelSpec::Knn { n_neighbors: 5 },
            ModelFamily::LogReg => ModelSpec::LogReg { c: 1.0 },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::DecisionTree => "DT",
            ModelFamily::Knn => "kNN",
            ModelFamily::LogReg => "LogReg",
        }
    }
}

impl ModelSpec {
    pub fn family(&self) -> ModelFamily {
        match self {
            ModelSpec::DecisionTree { .. } => ModelFamily::DecisionTree,
            ModelSpec::Knn { .. } => ModelFamily::Knn,
            ModelSpec::LogReg { .. } => ModelFamily::LogReg,
        }
    }
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Acc,
        MetricKind::BAcc,
        MetricKind::F1,
        MetricKind::AUC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Acc => "Acc",
            MetricKind::BAcc => "BAcc",
            MetricKind::F1 => "F1",
            MetricKind::AUC => "AUC",
        }
    }
}

impl Tuning {
    pub const ALL: [Tuning; 3] = [Tuning::NoTuning, Tuning::ModelTuning, Tuning::FullTuning];

    pub fn name(self) -> &'static str {
        match self {
            Tuning::NoTuning => "NoTuning",
            Tuning::ModelTuning => "ModelTuning",
            Tuning::FullTuning => "FullTuning",
        }
    }
}

macro_rules! named {
    ($ty:ty, $kind:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$ty>::ALL
                    .into_iter()
                    .find(|v| v.name().eq_ignore_ascii_case(s))
                    .ok_or_else(|| ModelError::Unknown {
                        kind: $kind,
                        name: s.to_string(),
                    })
            }
        }
    };
}

named!(ModelFamily, "model");
named!(MetricKind, "metric");
named!(Tuning, "tuning strategy");

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::DecisionTree { max_depth: Some(d) } => write!(f, "DT(max_depth={d})"),
            ModelSpec::DecisionTree { max_depth: None } => write!(f, "DT(max_depth=None)"),
            ModelSpec::Knn { n_neighbors } => write!(f, "kNN(n_neighbors={n_neighbors})"),
            ModelSpec::LogReg { c } => write!(f, "LogReg(C={c})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in ModelFamily::ALL {
            assert_eq!(m.name().parse::<ModelFamily>().unwrap(), m);
            assert_eq!(
                serde_json::to_string(&m).unwrap(),
                format!("\"{}\"", m.name())
            );
        }
        assert_eq!("auc".parse::<MetricKind>().unwrap(), MetricKind::AUC);
        assert!("SVM".parse::<ModelFamily>().is_err());
    }

    #[test]
    fn tuning_spec_defaults() {
        let t: TuningSpec = serde_json::from_str(r#"{"strategy":"FullTuning"}"#).unwrap();
        assert_eq!(t, TuningSpec::new(Tuning::FullTuning));
        assert_eq!((t.inner_folds, t.budget), (3, 25));
    }
}
