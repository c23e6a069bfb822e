use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::friedman::nemenyi_consensus;
use super::heuristics::heuristic_consensus;
use super::kemeny::{kemeny_consensus, DEFAULT_KEMENY_CAP};
use super::quality::QualityTable;
use super::ranking::{RankingMatrix, WeakOrder};
use super::{AggregationError, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.95;
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Aggregation strategy. Display names: `R-M`, `R-Md`, `R-B`, `R-W`, `R-NW`,
/// `Q-M`, `Q-Md`, `Q-RM`, `Q-Th0.95`, `R-Nem0.05`, `R-Kem`.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Mean rank.
    RMean,
    /// Median rank.
    RMedian,
    /// Number of best-tier finishes.
    RBest,
    /// Number of worst-tier finishes; fewer is better.
    RWorst,
    /// Number of finishes outside the worst tier; more is better.
    RNonWorst,
    QMean,
    QMedian,
    /// Mean of per-dataset min-max rescaled quality.
    QRescaledMean,
    /// Number of datasets where quality ≥ θ · best quality.
    QThreshold(f64),
    /// Friedman test + Nemenyi post-hoc at the given significance level.
    Nemenyi(f64),
    Kemeny,
}

impl Strategy {
    pub fn heuristics() -> Vec<Strategy> {
        vec![
            Strategy::RMean,
            Strategy::RMedian,
            Strategy::RBest,
            Strategy::RWorst,
            Strategy::QMean,
            Strategy::QMedian,
            Strategy::QRescaledMean,
            Strategy::QThreshold(DEFAULT_THRESHOLD),
        ]
    }

    /// The default strategy set: all heuristics, Nemenyi at 0.05 and Kemeny.
    pub fn all() -> Vec<Strategy> {
        let mut v = Self::heuristics();
        v.push(Strategy::Nemenyi(DEFAULT_ALPHA));
        v.push(Strategy::Kemeny);
        v
    }

    pub fn is_heuristic(&self) -> bool {
        !matches!(self, Strategy::Nemenyi(_) | Strategy::Kemeny)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::RMean => f.write_str("R-M"),
            Strategy::RMedian => f.write_str("R-Md"),
            Strategy::RBest => f.write_str("R-B"),
            Strategy::RWorst => f.write_str("R-W"),
            Strategy::RNonWorst => f.write_str("R-NW"),
            Strategy::QMean => f.write_str("Q-M"),
            Strategy::QMedian => f.write_str("Q-Md"),
            Strategy::QRescaledMean => f.write_str("Q-RM"),
            Strategy::QThreshold(t) => write!(f, "Q-Th{t}"),
            Strategy::Nemenyi(a) => write!(f, "R-Nem{a}"),
            Strategy::Kemeny => f.write_str("R-Kem"),
        }
    }
}

impl FromStr for Strategy {
    type Err = AggregationError;

    fn from_str(s: &str) -> Result<Self> {
        let param = |rest: &str, default: f64| -> Result<f64> {
            if rest.is_empty() {
                Ok(default)
            } else {
                rest.parse()
                    .map_err(|_| AggregationError::UnknownStrategy(s.to_string()))
            }
        };
        Ok(match s {
            "R-M" => Strategy::RMean,
            "R-Md" => Strategy::RMedian,
            "R-B" => Strategy::RBest,
            "R-W" => Strategy::RWorst,
            "R-NW" => Strategy::RNonWorst,
            "Q-M" => Strategy::QMean,
            "Q-Md" => Strategy::QMedian,
            "Q-RM" => Strategy::QRescaledMean,
            "R-Kem" => Strategy::Kemeny,
            _ if s.starts_with("Q-Th") => Strategy::QThreshold(param(&s[4..], DEFAULT_THRESHOLD)?),
            _ if s.starts_with("R-Nem") => Strategy::Nemenyi(param(&s[5..], DEFAULT_ALPHA)?),
            _ => return Err(AggregationError::UnknownStrategy(s.to_string())),
        })
    }
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A consensus weak order over encoders with the scores and diagnostics
/// that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusResult {
    pub strategy: Strategy,
    pub encoders: Vec<String>,
    pub order: WeakOrder,
    /// Heuristic score, Nemenyi dominance rank or Kemeny tier rank.
    pub scores: Vec<Option<f64>>,
    pub diagnostics: Vec<(String, f64)>,
}

impl ConsensusResult {
    pub fn new(
        strategy: Strategy,
        encoders: Vec<String>,
        order: WeakOrder,
        scores: Vec<Option<f64>>,
    ) -> Self {
        ConsensusResult {
            strategy,
            encoders,
            order,
            scores,
            diagnostics: Vec::new(),
        }
    }

    /// `C[i][h] = c_i <= c_h` over ranked encoders.
    pub fn adjacency(&self) -> Vec<Vec<Option<bool>>> {
        self.order.adjacency()
    }

    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.diagnostics
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
    }

    /// `encoder,rank,score` rows in encoder order; missing values are empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["encoder", "rank", "score"]).unwrap();
        let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for (i, e) in self.encoders.iter().enumerate() {
            w.write_record([e.clone(), fmt(self.order.rank(i)), fmt(self.scores[i])])
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Ranks each dataset and aggregates with `strategy`.
pub fn consensus(strategy: &Strategy, table: &QualityTable) -> Result<ConsensusResult> {
    let rankings = RankingMatrix::from_qualities(table);
    match strategy {
        Strategy::Nemenyi(alpha) => nemenyi_consensus(&rankings, *alpha),
        Strategy::Kemeny => kemeny_consensus(&rankings, DEFAULT_KEMENY_CAP),
        _ => heuristic_consensus(strategy, table, &rankings),
    }
}
