use super::consensus::{ConsensusResult, Strategy};
use super::quality::QualityTable;
use super::ranking::{RankingMatrix, WeakOrder};
use super::{AggregationError, Result};
use crate::util::{mean, median};

/// Heuristic scores are compared after rounding to this many decimals.
const SCORE_DECIMALS: i32 = 9;

/// Per-encoder score of a heuristic strategy, `None` for encoders without
/// any evaluation. Missing entries are skipped. Returns the scores and whether
/// higher scores are better.
pub fn heuristic_scores(
    strategy: &Strategy,
    table: &QualityTable,
    rankings: &RankingMatrix,
) -> Result<(Vec<Option<f64>>, bool)> {
    let n = table.n_encoders();
    let over_ranks = |f: &dyn Fn(&[f64]) -> f64| -> Vec<Option<f64>> {
        (0..n)
            .map(|i| {
                let r = rankings.ranks_of(i);
                (!r.is_empty()).then(|| f(&r))
            })
            .collect()
    };
    let over_qualities = |f: &dyn Fn(usize, usize, f64) -> f64,
                          reduce: &dyn Fn(&[f64]) -> f64|
     -> Vec<Option<f64>> {
        (0..n)
            .map(|i| {
                let v: Vec<f64> = (0..table.n_datasets())
                    .filter_map(|j| table.get(i, j).map(|q| f(i, j, q)))
                    .collect();
                (!v.is_empty()).then(|| reduce(&v))
            })
            .collect()
    };
    let tier_count = |best: bool, inside: bool| -> Vec<Option<f64>> {
        (0..n)
            .map(|i| {
                let ranked: Vec<&WeakOrder> = rankings
                    .orders
                    .iter()
                    .filter(|o| o.rank(i).is_some())
                    .collect();
                if ranked.is_empty() {
                    return None;
                }
                let count = ranked
                    .iter()
                    .filter(|o| {
                        let tier = if best { o.best_tier() } else { o.worst_tier() };
                        tier.contains(&i) == inside
                    })
                    .count();
                Some(count as f64)
            })
            .collect()
    };
    let sum = |v: &[f64]| v.iter().sum::<f64>();
    Ok(match *strategy {
        Strategy::RMean => (over_ranks(&mean), false),
        Strategy::RMedian => (over_ranks(&median), false),
        Strategy::RBest => (tier_count(true, true), true),
        Strategy::RWorst => (tier_count(false, true), false),
        Strategy::RNonWorst => (tier_count(false, false), true),
        Strategy::QMean => (over_qualities(&|_, _, q| q, &mean), true),
        Strategy::QMedian => (over_qualities(&|_, _, q| q, &median), true),
        Strategy::QRescaledMean => {
            let rescale = |_: usize, j: usize, q: f64| {
                let (lo, hi) = (table.min(j).unwrap(), table.max(j).unwrap());
                if hi > lo {
                    (q - lo) / (hi - lo)
                } else {
                    1.0
                }
            };
            (over_qualities(&rescale, &mean), true)
        }
        Strategy::QThreshold(theta) => {
            if theta > 1.0 {
                return Err(AggregationError::InvalidParameter(format!(
                    "threshold {theta} > 1"
                )));
            }
            let hit = |_: usize, j: usize, q: f64| {
                f64::from(u8::from(q >= theta * table.max(j).unwrap()))
            };
            (over_qualities(&hit, &sum), true)
        }
        Strategy::Nemenyi(_) | Strategy::Kemeny => {
            return Err(AggregationError::InvalidParameter(format!(
                "{strategy} is not a heuristic"
            )))
        }
    })
}

pub fn heuristic_consensus(
    strategy: &Strategy,
    table: &QualityTable,
    rankings: &RankingMatrix,
) -> Result<ConsensusResult> {
    let (scores, higher) = heuristic_scores(strategy, table, rankings)?;
    let order = WeakOrder::from_scores(&scores, higher, SCORE_DECIMALS);
    Ok(ConsensusResult::new(
        strategy.clone(),
        table.encoders().to_vec(),
        order,
        scores,
    ))
}
