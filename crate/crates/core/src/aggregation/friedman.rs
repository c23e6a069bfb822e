use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, Normal};

use super::consensus::{ConsensusResult, Strategy};
use super::ranking::{RankingMatrix, WeakOrder};
use super::{AggregationError, Result};

/// Tie-adjusted Friedman test over the complete sub-matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub t: f64,
    pub p: f64,
    pub s_r: f64,
    pub s_t: f64,
    pub c: f64,
    /// Datasets used (those with at least one ranked encoder).
    pub m: usize,
    /// Encoders ranked on every used dataset, by index into the matrix.
    pub encoders: Vec<usize>,
    /// Datasets used, by index.
    pub datasets: Vec<usize>,
    /// `S_r = C`: every dataset ties all encoders; `p` is then 1.
    pub degenerate: bool,
    /// Mean rank of each used encoder after re-ranking over the complete set.
    pub mean_ranks: Vec<f64>,
}

/// Datasets with any ranked encoder and the encoders ranked on all of them,
/// with ranks recomputed over that encoder set.
fn complete_submatrix(rankings: &RankingMatrix) -> (Vec<usize>, Vec<usize>, Vec<WeakOrder>) {
    let datasets: Vec<usize> = (0..rankings.n_datasets())
        .filter(|&j| rankings.orders[j].n_ranked() > 0)
        .collect();
    let encoders: Vec<usize> = (0..rankings.n_encoders())
        .filter(|&i| {
            !datasets.is_empty()
                && datasets
                    .iter()
                    .all(|&j| rankings.orders[j].rank(i).is_some())
        })
        .collect();
    let orders = datasets
        .iter()
        .map(|&j| rankings.orders[j].restrict(&encoders))
        .collect();
    (datasets, encoders, orders)
}

pub fn friedman_test(rankings: &RankingMatrix) -> Result<FriedmanResult> {
    let (datasets, encoders, orders) = complete_submatrix(rankings);
    let (m, n) = (orders.len(), encoders.len());
    if m < 2 || n < 2 {
        return Err(AggregationError::TooSmall);
    }
    let (mf, nf) = (m as f64, n as f64);
    let rank = |j: usize, i: usize| orders[j].rank(i).expect("complete sub-matrix");
    let s_r: f64 = (0..m)
        .map(|j| (0..n).map(|i| rank(j, i).powi(2)).sum::<f64>())
        .sum();
    let sums: Vec<f64> = (0..n).map(|i| (0..m).map(|j| rank(j, i)).sum()).collect();
    let s_t = sums.iter().map(|s| s * s).sum::<f64>() / mf;
    let c = mf * nf * (nf + 1.0).powi(2) / 4.0;
    let mean_ranks = sums.iter().map(|s| s / mf).collect();
    let denominator = s_r - c;
    if denominator <= 1e-12 * c {
        return Ok(FriedmanResult {
            t: 0.0,
            p: 1.0,
            s_r,
            s_t,
            c,
            m,
            encoders,
            datasets,
            degenerate: true,
            mean_ranks,
        });
    }
    let t = (mf - 1.0) * (s_t - c) / denominator;
    let f = FisherSnedecor::new(nf - 1.0, (mf - 1.0) * (nf - 1.0))
        .expect("positive degrees of freedom");
    let p = f.sf(t.max(0.0)).clamp(0.0, 1.0);
    Ok(FriedmanResult {
        t,
        p,
        s_r,
        s_t,
        c,
        m,
        encoders,
        datasets,
        degenerate: false,
        mean_ranks,
    })
}

/// Upper-`alpha` quantile of the studentized range of `k` standard normals
/// (infinite degrees of freedom), from
/// `P(R <= q) = k ∫ φ(z) [Φ(z + q) - Φ(z)]^(k-1) dz`.
pub fn studentized_range_quantile(k: usize, alpha: f64) -> f64 {
    assert!(k >= 2 && alpha > 0.0 && alpha < 1.0);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let cdf = |q: f64| {
        const STEPS: usize = 2000;
        let (lo, hi) = (-9.0, 9.0);
        let h = (hi - lo) / STEPS as f64;
        let f = |z: f64| {
            let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
            phi * (normal.cdf(z + q) - normal.cdf(z)).powi(k as i32 - 1)
        };
        let mut s = f(lo) + f(hi);
        for i in 1..STEPS {
            s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        k as f64 * s * h / 3.0
    };
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < 1.0 - alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nemenyi critical value `q_alpha` (studentized range quantile over √2).
pub fn nemenyi_q(k: usize, alpha: f64) -> f64 {
    studentized_range_quantile(k, alpha) / std::f64::consts::SQRT_2
}

/// Critical difference of mean ranks for `k` encoders over `m` datasets.
pub fn nemenyi_cd(k: usize, m: usize, alpha: f64) -> f64 {
    nemenyi_q(k, alpha) * (k as f64 * (k as f64 + 1.0) / (6.0 * m as f64)).sqrt()
}

/// Friedman test followed by pairwise Nemenyi comparisons. Each encoder's
/// consensus score is `1 +` the number of encoders significantly better than it.
/// Without a Friedman rejection every compared encoder ties. Encoders missing
/// on some dataset are left unranked.
pub fn nemenyi_consensus(rankings: &RankingMatrix, alpha: f64) -> Result<ConsensusResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(AggregationError::InvalidParameter(format!(
            "significance level {alpha}"
        )));
    }
    let strategy = Strategy::Nemenyi(alpha);
    let n_all = rankings.n_encoders();
    let mut scores = vec![None; n_all];
    let mut diagnostics = Vec::new();
    match friedman_test(rankings) {
        Ok(fr) => {
            let n = fr.encoders.len();
            let cd = nemenyi_cd(n, fr.m, alpha);
            let rejected = !fr.degenerate && fr.p < alpha;
            for (a, &i) in fr.encoders.iter().enumerate() {
                let better = if rejected {
                    (0..n)
                        .filter(|&b| fr.mean_ranks[a] - fr.mean_ranks[b] >= cd)
                        .count()
                } else {
                    0
                };
                scores[i] = Some(1.0 + better as f64);
            }
            diagnostics.extend([
                ("friedman_t".to_string(), fr.t),
                ("friedman_p".to_string(), fr.p),
                ("critical_difference".to_string(), cd),
                ("rejected".to_string(), f64::from(u8::from(rejected))),
            ]);
        }
        Err(AggregationError::TooSmall) => {
            let (_, encoders, _) = complete_submatrix(rankings);
            for i in encoders {
                scores[i] = Some(1.0);
            }
            diagnostics.push(("rejected".to_string(), 0.0));
        }
        Err(e) => return Err(e),
    }
    let order = WeakOrder::from_scores(&scores, false, 9);
    let mut result = ConsensusResult::new(strategy, rankings.encoders.clone(), order, scores);
    result.diagnostics.extend(diagnostics);
    Ok(result)
}

/// Dominance counting over given mean ranks and critical difference.
#[cfg(test)]
fn dominance(mean_ranks: &[f64], cd: f64) -> Vec<f64> {
    (0..mean_ranks.len())
        .map(|a| {
            1.0 + (0..mean_ranks.len())
                .filter(|&b| mean_ranks[a] - mean_ranks[b] >= cd)
                .count() as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(ranks: Vec<Vec<Option<f64>>>) -> RankingMatrix {
        // ranks[j][i]: dataset j, encoder i
        let n = ranks[0].len();
        RankingMatrix {
            encoders: (0..n).map(|i| format!("E{i}")).collect(),
            datasets: (0..ranks.len()).map(|j| format!("D{j}")).collect(),
            orders: ranks.iter().map(|r| WeakOrder::from_ranks(r)).collect(),
        }
    }

    #[test]
    fn hand_value_perfect_agreement() {
        let r = vec![vec![Some(1.0), Some(2.0), Some(3.0)]; 3];
        let f = friedman_test(&matrix(r)).unwrap();
        assert_eq!((f.s_r, f.s_t, f.c, f.t), (42.0, 42.0, 36.0, 2.0));
        // F(2, 4) survival at 2 is (1 + 2·2/4)^-2 = 1/4
        assert!((f.p - 0.25).abs() < 1e-9, "{}", f.p);
        assert!(f.p > 0.05);
    }

    #[test]
    fn perfect_agreement_gives_m_minus_one() {
        for m in 2..8 {
            let r = vec![vec![Some(2.0), Some(1.0), Some(4.0), Some(3.0)]; m];
            assert!((friedman_test(&matrix(r)).unwrap().t - (m as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn all_tied_is_degenerate() {
        let r = vec![vec![Some(1.0); 3]; 4];
        let f = friedman_test(&matrix(r.clone())).unwrap();
        assert!(f.degenerate);
        assert_eq!(f.p, 1.0);
        let c = nemenyi_consensus(&matrix(r), 0.05).unwrap();
        assert_eq!(c.order.ranks(), &[Some(2.0); 3]);
    }

    #[test]
    fn relabelling_datasets_is_invariant() {
        let r = vec![
            vec![Some(1.0), Some(2.0), Some(3.0)],
            vec![Some(2.0), Some(1.0), Some(3.0)],
            vec![Some(1.0), Some(3.0), Some(2.0)],
        ];
        let mut rev = r.clone();
        rev.reverse();
        assert_eq!(
            friedman_test(&matrix(r)).unwrap().t,
            friedman_test(&matrix(rev)).unwrap().t
        );
    }

    #[test]
    fn missing_encoders_are_dropped() {
        let r = vec![
            vec![Some(1.0), Some(2.0), None],
            vec![Some(1.0), Some(2.0), Some(3.0)],
            vec![None; 3],
        ];
        let f = friedman_test(&matrix(r)).unwrap();
        assert_eq!(f.encoders, vec![0, 1]);
        assert_eq!(f.datasets, vec![0, 1]);
    }

    #[test]
    fn studentized_range_matches_published_table() {
        // Nemenyi q_0.05 for k = 2, 3, 4, 5, 10 groups.
        for (k, q) in [(2, 1.960), (3, 2.343), (4, 2.569), (5, 2.728), (10, 3.164)] {
            assert!(
                (nemenyi_q(k, 0.05) - q).abs() < 1e-3,
                "k={k}: {}",
                nemenyi_q(k, 0.05)
            );
        }
        // q_0.10 row
        for (k, q) in [(2, 1.645), (3, 2.052), (5, 2.459)] {
            assert!(
                (nemenyi_q(k, 0.10) - q).abs() < 1e-3,
                "k={k}: {}",
                nemenyi_q(k, 0.10)
            );
        }
    }

    #[test]
    fn dominance_counting_example() {
        assert_eq!(dominance(&[1.0, 1.1, 3.0], 0.5), vec![1.0, 1.0, 3.0]);
    }

    #[test]
    fn critical_difference_shrinks_with_m() {
        let pair = |m: usize| matrix(vec![vec![Some(1.0), Some(2.0)]; m]);
        assert!(nemenyi_cd(2, 40, 0.05) < nemenyi_cd(2, 10, 0.05) / 1.9);
        // Small m: Friedman does not reject, so both tie.
        let c = nemenyi_consensus(&pair(3), 0.05).unwrap();
        assert_eq!(c.order.ranks(), &[Some(1.5), Some(1.5)]);
        let c = nemenyi_consensus(&pair(20), 0.05).unwrap();
        assert_eq!(c.order.ranks(), &[Some(1.0), Some(2.0)]);
    }
}
