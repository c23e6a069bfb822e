use rand::Rng;

use super::spec::{ModelFamily, ModelSpec};
use crate::util::rng;

/// Hyperparameter search spaces: a small grid for model tuning and
/// intervals for full-pipeline tuning.
pub struct SearchSpace;

impl SearchSpace {
    pub fn grid(family: ModelFamily) -> Vec<ModelSpec> {
        match family {
            ModelFamily::DecisionTree => [Some(2), Some(5), None]
                .into_iter()
                .map(|max_depth| ModelSpec::DecisionTree { max_depth })
                .collect(),
            ModelFamily::Knn => [2, 5, 10]
                .into_iter()
                .map(|n_neighbors| ModelSpec::Knn { n_neighbors })
                .collect(),
            ModelFamily::LogReg => [0.0, 1.0, 10.0]
                .into_iter()
                .map(|c| ModelSpec::LogReg { c })
                .collect(),
        }
    }

    /// `budget` seeded uniform draws from the family's interval.
    pub fn sample(family: ModelFamily, budget: usize, seed: u64) -> Vec<ModelSpec> {
        let mut r = rng(seed);
        (0..budget)
            .map(|_| match family {
                ModelFamily::DecisionTree => ModelSpec::DecisionTree {
                    max_depth: Some(r.random_range(2..=5)),
                },
                ModelFamily::Knn => ModelSpec::Knn {
                    n_neighbors: r.random_range(2..=10),
                },
                ModelFamily::LogReg => ModelSpec::LogReg {
                    c: r.random_range(0.2..=5.0),
                },
            })
            .collect()
    }
}

/// Returns the candidate with the highest objective, the first one on ties.
/// Candidates whose objective is `None` (failed evaluation) are skipped.
pub fn grid_search(
    candidates: &[ModelSpec],
    mut objective: impl FnMut(&ModelSpec) -> Option<f64>,
) -> Option<(ModelSpec, f64)> {
    let mut best: Option<(ModelSpec, f64)> = None;
    let mut seen: Vec<ModelSpec> = Vec::new();
    for c in candidates {
        // Repeated draws cannot beat their first occurrence.
        if seen.contains(c) {
            continue;
        }
        seen.push(*c);
        if let Some(v) = objective(c) {
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((*c, v));
            }
        }
    }
    best
}

/// Seeded random search over the family's interval.
pub fn interval_search(
    family: ModelFamily,
    budget: usize,
    seed: u64,
    objective: impl FnMut(&ModelSpec) -> Option<f64>,
) -> Option<(ModelSpec, f64)> {
    grid_search(&SearchSpace::sample(family, budget, seed), objective)
}
