use serde::{Deserialize, Serialize};

use super::quality::QualityTable;
use super::{AggregationError, Result};

/// Qualities equal after rounding to this many decimals tie.
pub(crate) const QUALITY_DECIMALS: i32 = 6;

/// Ranking with ties: fractional (average) ranks, `None` for unranked items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakOrder {
    ranks: Vec<Option<f64>>,
}

fn round_key(x: f64, decimals: i32) -> i64 {
    (x * 10f64.powi(decimals)).round() as i64
}

impl WeakOrder {
    /// Ranks items by score; equal scores after rounding to `decimals` tie.
    pub fn from_scores(scores: &[Option<f64>], higher_is_better: bool, decimals: i32) -> Self {
        let mut keyed: Vec<(i64, usize)> = scores
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                s.map(|s| {
                    (
                        round_key(if higher_is_better { -s } else { s }, decimals),
                        i,
                    )
                })
            })
            .collect();
        keyed.sort();
        let mut ranks = vec![None; scores.len()];
        let mut start = 0;
        while start < keyed.len() {
            let mut end = start;
            while end + 1 < keyed.len() && keyed[end + 1].0 == keyed[start].0 {
                end += 1;
            }
            let avg = (start + end) as f64 / 2.0 + 1.0;
            for &(_, i) in &keyed[start..=end] {
                ranks[i] = Some(avg);
            }
            start = end + 1;
        }
        WeakOrder { ranks }
    }

    /// Builds an order from ranks (smaller is better); ranks are normalised
    /// to fractional ranks.
    pub fn from_ranks(ranks: &[Option<f64>]) -> Self {
        Self::from_scores(ranks, false, 9)
    }

    /// Weak order from a complete transitive adjacency: item `i` is placed
    /// by the number of items strictly above it.
    pub fn from_adjacency(adjacency: &[Vec<bool>]) -> Self {
        let n = adjacency.len();
        let above: Vec<Option<f64>> = (0..n)
            .map(|i| {
                Some(
                    (0..n)
                        .filter(|&h| h != i && adjacency[h][i] && !adjacency[i][h])
                        .count() as f64,
                )
            })
            .collect();
        Self::from_ranks(&above)
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[Option<f64>] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> Option<f64> {
        self.ranks[i]
    }

    pub fn n_ranked(&self) -> usize {
        self.ranks.iter().flatten().count()
    }

    /// `Some(r_i <= r_h)` when both are ranked.
    pub fn weakly_prefers(&self, i: usize, h: usize) -> Option<bool> {
        Some(self.ranks[i]? <= self.ranks[h]?)
    }

    fn tier(&self, best: bool) -> Vec<usize> {
        let target =
            self.ranks
                .iter()
                .flatten()
                .copied()
                .reduce(if best { f64::min } else { f64::max });
        match target {
            Some(t) => (0..self.len())
                .filter(|&i| self.ranks[i] == Some(t))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Items tied at the top.
    pub fn best_tier(&self) -> Vec<usize> {
        self.tier(true)
    }

    pub fn worst_tier(&self) -> Vec<usize> {
        self.tier(false)
    }

    /// Re-ranks over a subset of items (in the given order), keeping ties.
    pub fn restrict(&self, items: &[usize]) -> WeakOrder {
        WeakOrder::from_ranks(&items.iter().map(|&i| self.ranks[i]).collect::<Vec<_>>())
    }

    /// `O[i][h] = r_i <= r_h` over ranked items; `None` if either is unranked.
    pub fn adjacency(&self) -> Vec<Vec<Option<bool>>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|h| self.weakly_prefers(i, h)).collect())
            .collect()
    }
}

/// Ranks one dataset's qualities: higher quality is better, qualities equal
/// to six decimals tie, missing stays missing.
pub fn rank_from_qualities(column: &[Option<f64>]) -> Result<WeakOrder> {
    if column.iter().all(Option::is_none) {
        return Err(AggregationError::EmptyColumn);
    }
    Ok(WeakOrder::from_scores(column, true, QUALITY_DECIMALS))
}

/// One weak order per dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingMatrix {
    pub encoders: Vec<String>,
    pub datasets: Vec<String>,
    pub orders: Vec<WeakOrder>,
}

impl RankingMatrix {
    /// Datasets without any quality get an all-missing order.
    pub fn from_qualities(table: &QualityTable) -> Self {
        let orders = (0..table.n_datasets())
            .map(|j| {
                let col = table.column(j);
                rank_from_qualities(&col).unwrap_or(WeakOrder {
                    ranks: vec![None; col.len()],
                })
            })
            .collect();
        RankingMatrix {
            encoders: table.encoders().to_vec(),
            datasets: table.datasets().to_vec(),
            orders,
        }
    }

    pub fn n_encoders(&self) -> usize {
        self.encoders.len()
    }

    pub fn n_datasets(&self) -> usize {
        self.orders.len()
    }

    /// Ranks of encoder `i` over the datasets where it is ranked.
    pub fn ranks_of(&self, i: usize) -> Vec<f64> {
        self.orders.iter().filter_map(|o| o.rank(i)).collect()
    }
}
