use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{Combo, QualityGrid};
use super::similarity::{jaccard_best, spearman_with_ties};
use super::{AnalysisError, Result};
use crate::aggregation::{consensus, rank_from_qualities, Strategy, WeakOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Model,
    Metric,
    Tuning,
    Aggregation,
}

impl Factor {
    pub const ALL: [Factor; 4] = [
        Factor::Model,
        Factor::Metric,
        Factor::Tuning,
        Factor::Aggregation,
    ];

    fn of(self, c: &Combo) -> &str {
        match self {
            Factor::Model => &c.model,
            Factor::Metric => &c.metric,
            Factor::Tuning => &c.tuning,
            Factor::Aggregation => unreachable!("aggregation is not a combo field"),
        }
    }

    fn with(self, c: &Combo, value: &str) -> Combo {
        let mut c = c.clone();
        match self {
            Factor::Model => c.model = value.to_string(),
            Factor::Metric => c.metric = value.to_string(),
            Factor::Tuning => c.tuning = value.to_string(),
            Factor::Aggregation => unreachable!("aggregation is not a combo field"),
        }
        c
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::Model => "model",
            Factor::Metric => "metric",
            Factor::Tuning => "tuning",
            Factor::Aggregation => "aggregation",
        })
    }
}

impl FromStr for Factor {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self> {
        Factor::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| AnalysisError::InsufficientData(format!("unknown factor `{s}`")))
    }
}

/// Mean pairwise similarity between the values of one factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub factor: Factor,
    pub values: Vec<String>,
    /// Mean Spearman ρ; `None` where no comparison was possible.
    pub rho: Vec<Vec<Option<f64>>>,
    /// Mean Jaccard index of best tiers.
    pub jaccard: Vec<Vec<Option<f64>>>,
    /// Number of ranking pairs averaged per cell.
    pub counts: Vec<Vec<usize>>,
    /// How often the constant-rank-vector convention supplied ρ.
    pub degenerate_spearman: usize,
}

#[derive(Default, Clone)]
struct Acc {
    rho: f64,
    rho_n: usize,
    j: f64,
    j_n: usize,
}

impl SimilarityReport {
    /// Square matrix with ρ above the diagonal and J below it.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![self.factor.to_string()];
        header.extend(self.values.iter().cloned());
        w.write_record(&header).unwrap();
        for (a, name) in self.values.iter().enumerate() {
            let mut row = vec![name.clone()];
            for b in 0..self.values.len() {
                let v = match a.cmp(&b) {
                    std::cmp::Ordering::Less => self.rho[a][b],
                    std::cmp::Ordering::Greater => self.jaccard[a][b],
                    std::cmp::Ordering::Equal => Some(1.0),
                };
                row.push(v.map(|x| format!("{x:.6}")).unwrap_or_default());
            }
            w.write_record(&row).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

fn add(acc: &mut Acc, a: &WeakOrder, b: &WeakOrder, degenerate: &mut usize) {
    if let Ok(s) = spearman_with_ties(a, b) {
        acc.rho += s.rho;
        acc.rho_n += 1;
        *degenerate += usize::from(s.degenerate);
    }
    if a.n_ranked() > 0 && b.n_ranked() > 0 {
        acc.j += jaccard_best(a, b);
        acc.j_n += 1;
    }
}

/// Varies one factor while fixing the others and averages the similarity of
/// the resulting rankings. For model, metric and tuning the compared rankings
/// are per-dataset rankings; for aggregation they are consensus rankings
/// of each combination under each strategy.
pub fn sensitivity_matrix(
    grid: &QualityGrid,
    factor: Factor,
    strategies: &[Strategy],
) -> Result<SimilarityReport> {
    let values: Vec<String> = match factor {
        Factor::Aggregation => strategies.iter().map(|s| s.to_string()).collect(),
        _ => {
            let mut v: Vec<String> = grid
                .tables
                .keys()
                .map(|c| factor.of(c).to_string())
                .collect();
            v.sort();
            v.dedup();
            v
        }
    };
    if values.len() < 2 {
        return Err(AnalysisError::InsufficientData(format!(
            "{factor} takes {} value(s) in the store",
            values.len()
        )));
    }
    let k = values.len();
    let mut acc = vec![vec![Acc::default(); k]; k];
    let mut degenerate = 0;
    match factor {
        Factor::Aggregation => {
            for table in grid.tables.values() {
                let orders: Vec<Option<WeakOrder>> = strategies
                    .iter()
                    .map(|s| consensus(s, table).ok().map(|c| c.order))
                    .collect();
                for a in 0..k {
                    for b in a + 1..k {
                        if let (Some(x), Some(y)) = (&orders[a], &orders[b]) {
                            add(&mut acc[a][b], x, y, &mut degenerate);
                        }
                    }
                }
            }
        }
        _ => {
            for (combo, table_a) in &grid.tables {
                let a = values.iter().position(|v| v == factor.of(combo)).unwrap();
                for b in a + 1..k {
                    let Some(table_b) = grid.tables.get(&factor.with(combo, &values[b])) else {
                        continue;
                    };
                    for j in 0..table_a.n_datasets() {
                        if let (Ok(x), Ok(y)) = (
                            rank_from_qualities(&table_a.column(j)),
                            rank_from_qualities(&table_b.column(j)),
                        ) {
                            add(&mut acc[a][b], &x, &y, &mut degenerate);
                        }
                    }
                }
            }
        }
    }
    let mut rho = vec![vec![None; k]; k];
    let mut jaccard = vec![vec![None; k]; k];
    let mut counts = vec![vec![0; k]; k];
    for a in 0..k {
        rho[a][a] = Some(1.0);
        jaccard[a][a] = Some(1.0);
        for b in a + 1..k {
            let c = &acc[a][b];
            let r = (c.rho_n > 0).then(|| c.rho / c.rho_n as f64);
            let j = (c.j_n > 0).then(|| c.j / c.j_n as f64);
            (rho[a][b], rho[b][a]) = (r, r);
            (jaccard[a][b], jaccard[b][a]) = (j, j);
            counts[a][b] = c.rho_n.max(c.j_n);
            counts[b][a] = counts[a][b];
        }
    }
    Ok(SimilarityReport {
        factor,
        values,
        rho,
        jaccard,
        counts,
        degenerate_spearman: degenerate,
    })
}
