use std::collections::{BTreeMap, BTreeSet};

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::aggregation::QualityTable;
use crate::models::EvaluationRecord;
use crate::util::rng;

/// A fixed (model, metric, tuning) combination.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Combo {
    pub model: String,
    pub metric: String,
    pub tuning: String,
}

impl std::fmt::Display for Combo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.model, self.metric, self.tuning)
    }
}

/// One quality table per factor combination, sharing the encoder and dataset
/// axes (both sorted lexicographically).
#[derive(Debug, Clone, PartialEq)]
pub struct QualityGrid {
    pub encoders: Vec<String>,
    pub datasets: Vec<String>,
    pub tables: BTreeMap<Combo, QualityTable>,
}

impl QualityGrid {
    /// Builds the grid from evaluation records. Values of the same cell under
    /// several seeds are averaged; missing evaluations are skipped.
    pub fn from_records(records: &[EvaluationRecord]) -> Self {
        let encoders: Vec<String> = records
            .iter()
            .map(|r| r.encoder.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let datasets: Vec<String> = records
            .iter()
            .map(|r| r.dataset.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut cells: BTreeMap<(Combo, usize, usize), Vec<f64>> = BTreeMap::new();
        let mut combos = BTreeSet::new();
        for r in records {
            let combo = Combo {
                model: r.model.to_string(),
                metric: r.metric.to_string(),
                tuning: r.tuning.to_string(),
            };
            combos.insert(combo.clone());
            let i = encoders.binary_search(&r.encoder).unwrap();
            let j = datasets.binary_search(&r.dataset).unwrap();
            let cell = cells.entry((combo, i, j)).or_default();
            if let Some(v) = r.value {
                cell.push(v);
            }
        }
        let tables = combos
            .into_iter()
            .map(|combo| {
                let values = (0..encoders.len())
                    .map(|i| {
                        (0..datasets.len())
                            .map(|j| {
                                cells
                                    .get(&(combo.clone(), i, j))
                                    .filter(|v| !v.is_empty())
                                    .map(|v| v.iter().sum::<f64>() / v.len() as f64)
                            })
                            .collect()
                    })
                    .collect();
                let table = QualityTable::new(encoders.clone(), datasets.clone(), values)
                    .expect("consistent shape");
                (combo, table)
            })
            .collect();
        QualityGrid {
            encoders,
            datasets,
            tables,
        }
    }

    /// Keeps combinations matching every given factor value.
    pub fn filter(
        &self,
        model: Option<&str>,
        metric: Option<&str>,
        tuning: Option<&str>,
    ) -> QualityGrid {
        let keep =
            |want: Option<&str>, have: &str| want.is_none_or(|w| w.eq_ignore_ascii_case(have));
        QualityGrid {
            encoders: self.encoders.clone(),
            datasets: self.datasets.clone(),
            tables: self
                .tables
                .iter()
                .filter(|(c, _)| {
                    keep(model, &c.model) && keep(metric, &c.metric) && keep(tuning, &c.tuning)
                })
                .map(|(c, t)| (c.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// Synthetic grid with a fixed ground-truth encoder order: encoder `i` has
/// true quality `0.9 - 0.02 i` and every cell adds independent Gaussian noise.
pub fn synthetic_grid(
    n_encoders: usize,
    n_datasets: usize,
    noise_sd: f64,
    seed: u64,
) -> QualityGrid {
    let mut r = rng(seed);
    let noise = Normal::new(0.0, noise_sd).expect("non-negative noise");
    let encoders: Vec<String> = (0..n_encoders).map(|i| format!("E{i:02}")).collect();
    let datasets: Vec<String> = (0..n_datasets).map(|j| format!("D{j:03}")).collect();
    let values = (0..n_encoders)
        .map(|i| {
            (0..n_datasets)
                .map(|_| Some(0.9 - 0.02 * i as f64 + noise.sample(&mut r)))
                .collect()
        })
        .collect();
    let combo = Combo {
        model: "synthetic".into(),
        metric: "Acc".into(),
        tuning: "NoTuning".into(),
    };
    let table = QualityTable::new(encoders.clone(), datasets.clone(), values).unwrap();
    QualityGrid {
        encoders,
        datasets,
        tables: BTreeMap::from([(combo, table)]),
    }
}
