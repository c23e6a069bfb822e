use super::target::{LevelStats, LevelTable};
use super::{EncoderError, Result};

/// Linear random-intercept model `y = β0 + u_l + ε` fitted by profile maximum
/// likelihood.
#[derive(Debug, Clone, PartialEq)]
pub struct GlmmFit {
    pub intercept: f64,
    /// Posterior means of the random intercepts (zero for levels without rows).
    pub random_effects: Vec<f64>,
    pub tau2: f64,
    pub sigma2: f64,
}

impl GlmmFit {
    /// Encoding table `β0 + û_l`; unseen levels get `β0`.
    pub fn table(&self) -> LevelTable {
        LevelTable {
            values: self
                .random_effects
                .iter()
                .map(|u| self.intercept + u)
                .collect(),
            fallback: self.intercept,
        }
    }
}

const MIN_SIGMA2: f64 = 1e-12;
const LOG10_LAMBDA_MIN: f64 = -8.0;
const LOG10_LAMBDA_MAX: f64 = 8.0;
const GRID_STEPS_PER_DECADE: usize = 4;

struct Groups {
    sizes: Vec<f64>,
    means: Vec<f64>,
    within_ss: f64,
    n: f64,
}

impl Groups {
    /// GLS intercept and residual quadratic form for variance ratio λ = τ²/σ².
    fn intercept_and_q(&self, lambda: f64) -> (f64, f64) {
        let weights: Vec<f64> = self.sizes.iter().map(|&n| n / (1.0 + n * lambda)).collect();
        let wsum: f64 = weights.iter().sum();
        let beta = weights
            .iter()
            .zip(&self.means)
            .map(|(w, m)| w * m)
            .sum::<f64>()
            / wsum;
        let between: f64 = weights
            .iter()
            .zip(&self.means)
            .map(|(w, m)| w * (m - beta).powi(2))
            .sum();
        (beta, self.within_ss + between)
    }

    fn profile_loglik(&self, lambda: f64) -> f64 {
        let (_, q) = self.intercept_and_q(lambda);
        let logdet: f64 = self.sizes.iter().map(|&n| (n * lambda).ln_1p()).sum();
        -0.5 * self.n * (q.max(f64::MIN_POSITIVE) / self.n).ln() - 0.5 * logdet
    }
}

/// Fits the random-intercept model to binary targets grouped by level.
///
/// The variance ratio is found by a log-spaced grid search refined with
/// golden-section search; β0 and σ² then follow in closed form.
pub fn glmm_fit(stats: &LevelStats) -> Result<GlmmFit> {
    let present: Vec<usize> = (0..stats.cardinality())
        .filter(|&l| stats.counts[l] > 0)
        .collect();
    if present.is_empty() {
        return Err(EncoderError::FitDiverged(
            "no training rows with a level".into(),
        ));
    }
    let sizes: Vec<f64> = present.iter().map(|&l| stats.counts[l] as f64).collect();
    let means: Vec<f64> = present
        .iter()
        .map(|&l| stats.positives[l] as f64 / stats.counts[l] as f64)
        .collect();
    let within_ss: f64 = sizes
        .iter()
        .zip(&means)
        .map(|(n, p)| n * p * (1.0 - p))
        .sum();
    let groups = Groups {
        n: sizes.iter().sum(),
        sizes,
        means,
        within_ss,
    };

    let constant = within_ss == 0.0 && groups.means.iter().all(|&m| m == groups.means[0]);
    let lambda = if constant || groups.sizes.len() == 1 {
        0.0
    } else {
        best_ratio(&groups)
    };

    let (intercept, q) = groups.intercept_and_q(lambda);
    let sigma2 = (q / groups.n).max(MIN_SIGMA2);
    let tau2 = lambda * sigma2;
    let mut random_effects = vec![0.0; stats.cardinality()];
    for (g, &l) in present.iter().enumerate() {
        let n = groups.sizes[g];
        let shrink = n * lambda / (1.0 + n * lambda);
        random_effects[l] = shrink * (groups.means[g] - intercept);
    }
    if !(intercept.is_finite() && tau2.is_finite() && random_effects.iter().all(|u| u.is_finite()))
    {
        return Err(EncoderError::FitDiverged(format!(
            "non-finite estimates at variance ratio {lambda}"
        )));
    }
    Ok(GlmmFit {
        intercept,
        random_effects,
        tau2,
        sigma2,
    })
}

fn best_ratio(groups: &Groups) -> f64 {
    let steps = ((LOG10_LAMBDA_MAX - LOG10_LAMBDA_MIN) as usize) * GRID_STEPS_PER_DECADE;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| LOG10_LAMBDA_MIN + i as f64 / GRID_STEPS_PER_DECADE as f64)
        .collect();
    let ll = |x: f64| groups.profile_loglik(10f64.powf(x));

    let at_zero = groups.profile_loglik(0.0);
    let values: Vec<f64> = grid.iter().map(|&x| ll(x)).collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    if at_zero >= values[best] {
        return 0.0;
    }

    // golden-section refinement on the bracketing grid cells
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(steps)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (ll(c), ll(d));
    for _ in 0..80 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = ll(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = ll(d);
        }
    }
    let refined = (a + b) / 2.0;
    if ll(refined) >= values[best] {
        10f64.powf(refined)
    } else {
        10f64.powf(grid[best])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::target::mean_target_table;

    fn stats_from(groups: &[(usize, usize)]) -> LevelStats {
        let mut levels = Vec::new();
        let mut y = Vec::new();
        for (l, &(n, pos)) in groups.iter().enumerate() {
            for i in 0..n {
                levels.push(Some(l));
                y.push(u8::from(i < pos));
            }
        }
        LevelStats::new(&levels, &y, groups.len())
    }

    #[test]
    fn single_level_is_global_mean() {
        let fit = glmm_fit(&stats_from(&[(2, 1)])).unwrap();
        assert_eq!(fit.tau2, 0.0);
        assert!((fit.table().values[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn balanced_two_levels_closed_form() {
        // 9/10 and 1/10 positives: the profile likelihood peaks at λ = 1.5,
        // so each level is shrunk by 15/16 toward 0.5.
        let fit = glmm_fit(&stats_from(&[(10, 9), (10, 1)])).unwrap();
        let t = fit.table();
        assert!((fit.intercept - 0.5).abs() < 1e-12);
        assert!(
            (fit.tau2 / fit.sigma2 - 1.5).abs() < 1e-6,
            "ratio {}",
            fit.tau2 / fit.sigma2
        );
        assert!((t.values[0] - 0.875).abs() < 1e-6);
        assert!((t.values[1] - 0.125).abs() < 1e-6);
        assert!(t.values[0] > 0.5 && t.values[0] < 0.9);
    }

    #[test]
    fn small_between_variance_shrinks_fully() {
        // 3/4 vs 1/4 with four rows each: likelihood is decreasing in λ
        let fit = glmm_fit(&stats_from(&[(4, 3), (4, 1)])).unwrap();
        assert_eq!(fit.tau2, 0.0);
        assert_eq!(fit.table().values, vec![0.5, 0.5]);
    }

    #[test]
    fn pure_levels_approach_mean_target() {
        let s = stats_from(&[(20, 20), (20, 0), (10, 10)]);
        let fit = glmm_fit(&s).unwrap();
        let mt = mean_target_table(&s);
        for (g, m) in fit.table().values.iter().zip(&mt.values) {
            assert!((g - m).abs() < 1e-4, "{g} vs {m}");
        }
        assert!(fit.sigma2 > 0.0);
    }

    #[test]
    fn constant_target() {
        let fit = glmm_fit(&stats_from(&[(5, 5), (3, 3)])).unwrap();
        assert_eq!(fit.table().values, vec![1.0, 1.0]);
        assert!(fit.sigma2 > 0.0);
    }

    #[test]
    fn unseen_levels_get_intercept() {
        let mut s = stats_from(&[(10, 9), (10, 1)]);
        s.counts.push(0);
        s.positives.push(0);
        let fit = glmm_fit(&s).unwrap();
        assert_eq!(fit.table().values[2], fit.intercept);
    }

    #[test]
    fn shrinkage_between_intercept_and_level_mean() {
        let s = stats_from(&[(30, 25), (5, 1), (12, 6), (3, 3), (50, 10)]);
        let fit = glmm_fit(&s).unwrap();
        let mt = mean_target_table(&s);
        for (g, m) in fit.table().values.iter().zip(&mt.values) {
            let (lo, hi) = if *m < fit.intercept {
                (*m, fit.intercept)
            } else {
                (fit.intercept, *m)
            };
            assert!(*g >= lo - 1e-12 && *g <= hi + 1e-12);
        }
    }

    #[test]
    fn empty_stats_diverge() {
        let s = LevelStats::new(&[None, None], &[0, 1], 2);
        assert!(matches!(glmm_fit(&s), Err(EncoderError::FitDiverged(_))));
    }
}
