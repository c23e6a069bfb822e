use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{write_file, BenchError, Result};
use crate::aggregation::{consensus, AggregationError, ConsensusResult, Strategy};
use crate::analysis::{Combo, QualityGrid};
use crate::models::EvaluationRecord;

/// Optional fixed values for model, metric and tuning (case-insensitive).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactorFilter {
    pub model: Option<String>,
    pub metric: Option<String>,
    pub tuning: Option<String>,
}

impl FactorFilter {
    pub fn apply(&self, grid: &QualityGrid) -> Result<QualityGrid> {
        let out = grid.filter(
            self.model.as_deref(),
            self.metric.as_deref(),
            self.tuning.as_deref(),
        );
        if out.is_empty() {
            return Err(BenchError::EmptyFilter(self.to_string()));
        }
        Ok(out)
    }
}

impl std::fmt::Display for FactorFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "*".into());
        write!(
            f,
            "model={} metric={} tuning={}",
            show(&self.model),
            show(&self.metric),
            show(&self.tuning)
        )
    }
}

/// One consensus per (factor combination, strategy), combinations in sorted
/// order and strategies in request order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusSet {
    pub results: Vec<(Combo, ConsensusResult)>,
}

pub fn aggregate(
    records: &[EvaluationRecord],
    strategies: &[Strategy],
    filter: &FactorFilter,
) -> Result<ConsensusSet> {
    let grid = filter.apply(&QualityGrid::from_records(records))?;
    let mut results = Vec::new();
    for (combo, table) in &grid.tables {
        for s in strategies {
            let c = consensus(s, table).map_err(|e| match e {
                AggregationError::TooManyAlternatives { n, cap } => {
                    BenchError::TooManyAlternatives {
                        strategy: s.to_string(),
                        n,
                        cap,
                    }
                }
                other => other.into(),
            })?;
            results.push((combo.clone(), c));
        }
    }
    Ok(ConsensusSet { results })
}

pub(crate) fn combo_slug(c: &Combo) -> String {
    format!("{}_{}_{}", c.model, c.metric, c.tuning)
}

/// Writes `<combo>__<strategy>.csv` per result plus `consensus.json` into `dir`.
pub fn write_consensus(dir: &Path, set: &ConsensusSet) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (combo, c) in &set.results {
        paths.push(write_file(
            dir,
            &format!("{}__{}.csv", combo_slug(combo), c.strategy),
            &c.to_csv(),
        )?);
    }
    let json = serde_json::to_string_pretty(set).expect("consensus serializes");
    paths.push(write_file(dir, "consensus.json", &(json + "\n"))?);
    Ok(paths)
}
