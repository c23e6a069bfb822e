use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bootstrap::percentile_bootstrap;
use super::grid::QualityGrid;
use super::similarity::{jaccard_best, spearman_with_ties};
use super::{AnalysisError, Result};
use crate::aggregation::{consensus, Strategy, WeakOrder};
use crate::util::{derive_seed, mean, rng};

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicabilityOptions {
    /// Sample sizes `s`; each pair uses two disjoint sets of `s` datasets.
    pub sizes: Vec<usize>,
    pub pairs: usize,
    pub resamples: usize,
    pub seed: u64,
    /// The exhaustive strategies are slow, so only the heuristics by default.
    pub strategies: Vec<Strategy>,
}

impl Default for ReplicabilityOptions {
    fn default() -> Self {
        ReplicabilityOptions {
            sizes: vec![2, 5, 10],
            pairs: 100,
            resamples: 1000,
            seed: 0,
            strategies: Strategy::heuristics(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub size: usize,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Pairs that produced at least one comparable consensus pair.
    pub pairs: usize,
}

/// ρ- and J-replicability as functions of the sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicabilityCurve {
    pub rho: Vec<CurvePoint>,
    pub jaccard: Vec<CurvePoint>,
    pub degenerate_spearman: usize,
}

impl ReplicabilityCurve {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["measure", "size", "mean", "ci_low", "ci_high", "pairs"])
            .unwrap();
        for (name, points) in [("rho", &self.rho), ("J", &self.jaccard)] {
            for p in points.iter() {
                w.write_record([
                    name.to_string(),
                    p.size.to_string(),
                    format!("{:.6}", p.mean),
                    format!("{:.6}", p.ci_low),
                    format!("{:.6}", p.ci_high),
                    p.pairs.to_string(),
                ])
                .unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

struct PairOutcome {
    rho: Option<f64>,
    jaccard: Option<f64>,
    degenerate: usize,
}

fn compare_pair(
    grid: &QualityGrid,
    strategies: &[Strategy],
    a: &[usize],
    b: &[usize],
) -> PairOutcome {
    let (mut rhos, mut js, mut degenerate) = (Vec::new(), Vec::new(), 0);
    let run = |t: &crate::aggregation::QualityTable, s: &Strategy| -> Option<WeakOrder> {
        consensus(s, t).ok().map(|c| c.order)
    };
    for table in grid.tables.values() {
        let (ta, tb) = (table.select_datasets(a), table.select_datasets(b));
        for s in strategies {
            let (Some(x), Some(y)) = (run(&ta, s), run(&tb, s)) else {
                continue;
            };
            if let Ok(sp) = spearman_with_ties(&x, &y) {
                rhos.push(sp.rho);
                degenerate += usize::from(sp.degenerate);
            }
            if x.n_ranked() > 0 && y.n_ranked() > 0 {
                js.push(jaccard_best(&x, &y));
            }
        }
    }
    let avg = |v: Vec<f64>| (!v.is_empty()).then(|| mean(&v));
    PairOutcome {
        rho: avg(rhos),
        jaccard: avg(js),
        degenerate,
    }
}

fn point(size: usize, values: &[f64], resamples: usize, seed: u64) -> CurvePoint {
    if values.is_empty() {
        return CurvePoint {
            size,
            mean: f64::NAN,
            ci_low: f64::NAN,
            ci_high: f64::NAN,
            pairs: 0,
        };
    }
    let m = mean(values);
    let (lo, hi) = percentile_bootstrap(values, resamples, 0.95, seed);
    CurvePoint {
        size,
        mean: m,
        ci_low: lo.min(m),
        ci_high: hi.max(m),
        pairs: values.len(),
    }
}

/// Draws seeded pairs of disjoint dataset samples, aggregates each sample
/// with every strategy and factor combination in `grid`, and reports the
/// mean similarity of the paired consensus rankings with a bootstrap CI
/// over the pairs.
pub fn replicability_curve(
    grid: &QualityGrid,
    options: &ReplicabilityOptions,
) -> Result<ReplicabilityCurve> {
    let available = grid.datasets.len();
    let largest = options.sizes.iter().copied().max().unwrap_or(0);
    if 2 * largest > available {
        return Err(AnalysisError::NotEnoughDatasets {
            needed: 2 * largest,
            available,
        });
    }
    if grid.is_empty() || options.pairs == 0 {
        return Err(AnalysisError::InsufficientData(
            "no factor combinations or pairs to compare".into(),
        ));
    }
    let mut curve = ReplicabilityCurve {
        rho: Vec::new(),
        jaccard: Vec::new(),
        degenerate_spearman: 0,
    };
    for &size in &options.sizes {
        let size_seed = derive_seed(options.seed, size as u64);
        let outcomes: Vec<PairOutcome> = (0..options.pairs)
            .into_par_iter()
            .map(|p| {
                let mut order: Vec<usize> = (0..available).collect();
                order.shuffle(&mut rng(derive_seed(size_seed, p as u64)));
                let mut a = order[..size].to_vec();
                let mut b = order[size..2 * size].to_vec();
                a.sort_unstable();
                b.sort_unstable();
                compare_pair(grid, &options.strategies, &a, &b)
            })
            .collect();
        let rhos: Vec<f64> = outcomes.iter().filter_map(|o| o.rho).collect();
        let js: Vec<f64> = outcomes.iter().filter_map(|o| o.jaccard).collect();
        curve.degenerate_spearman += outcomes.iter().map(|o| o.degenerate).sum::<usize>();
        let boot_seed = derive_seed(size_seed, u64::MAX);
        curve
            .rho
            .push(point(size, &rhos, options.resamples, boot_seed));
        curve
            .jaccard
            .push(point(size, &js, options.resamples, boot_seed));
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::synthetic_grid;

    fn opts(sizes: Vec<usize>, pairs: usize, seed: u64) -> ReplicabilityOptions {
        ReplicabilityOptions {
            sizes,
            pairs,
            resamples: 200,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn noiseless_store_is_perfectly_replicable() {
        let g = synthetic_grid(5, 12, 0.0, 1);
        let c = replicability_curve(&g, &opts(vec![1, 3, 6], 20, 7)).unwrap();
        for p in c.rho.iter().chain(&c.jaccard) {
            assert_eq!((p.mean, p.ci_low, p.ci_high), (1.0, 1.0, 1.0));
            assert_eq!(p.pairs, 20);
        }
    }

    #[test]
    fn pure_noise_is_near_zero() {
        let g = synthetic_grid(8, 20, 5.0, 3);
        let c = replicability_curve(&g, &opts(vec![2], 100, 5)).unwrap();
        assert!(c.rho[0].mean.abs() < 0.1, "{}", c.rho[0].mean);
        assert!(c.rho[0].ci_low <= c.rho[0].mean && c.rho[0].mean <= c.rho[0].ci_high);
    }

    #[test]
    fn signal_grows_with_sample_size() {
        let g = synthetic_grid(8, 40, 0.05, 11);
        let c = replicability_curve(&g, &opts(vec![1, 5, 20], 60, 2)).unwrap();
        assert!(c.rho[0].mean < c.rho[1].mean && c.rho[1].mean < c.rho[2].mean);
    }

    #[test]
    fn too_large_sizes_are_rejected() {
        let g = synthetic_grid(3, 9, 0.1, 1);
        assert_eq!(
            replicability_curve(&g, &opts(vec![5], 10, 1)),
            Err(AnalysisError::NotEnoughDatasets {
                needed: 10,
                available: 9
            })
        );
    }

    #[test]
    fn pure_function_of_inputs() {
        let g = synthetic_grid(6, 20, 0.1, 4);
        let o = opts(vec![2, 4], 30, 9);
        assert_eq!(replicability_curve(&g, &o), replicability_curve(&g, &o));
        assert!(replicability_curve(&g, &o)
            .unwrap()
            .to_csv()
            .starts_with("measure,size,mean,ci_low,ci_high,pairs\nrho,2,"));
    }
}
