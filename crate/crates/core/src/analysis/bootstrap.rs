use rand::Rng;

use crate::util::{mean, quantile_sorted, rng};

/// Percentile bootstrap interval for the mean of `values`.
pub fn percentile_bootstrap(values: &[f64], resamples: usize, level: f64, seed: u64) -> (f64, f64) {
    assert!(!values.is_empty());
    let mut r = rng(seed);
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| {
            let sample: Vec<f64> = (0..values.len())
                .map(|_| values[r.random_range(0..values.len())])
                .collect();
            mean(&sample)
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    (
        quantile_sorted(&means, tail),
        quantile_sorted(&means, 1.0 - tail),
    )
}
