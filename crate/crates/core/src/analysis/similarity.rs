use super::{AnalysisError, Result};
use crate::aggregation::WeakOrder;

/// Spearman correlation, flagging the constant-vector convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    /// Set when a rank vector was constant and the convention (1 if both
    /// constant, else 0) supplied the value.
    pub degenerate: bool,
}

/// Pearson correlation of fractional ranks over the encoders ranked in both
/// orders (re-ranked over that common set).
pub fn spearman_with_ties(r1: &WeakOrder, r2: &WeakOrder) -> Result<Spearman> {
    let common: Vec<usize> = (0..r1.len().min(r2.len()))
        .filter(|&i| r1.rank(i).is_some() && r2.rank(i).is_some())
        .collect();
    if common.len() < 2 {
        return Err(AnalysisError::TooFewCommon);
    }
    let a: Vec<f64> = r1
        .restrict(&common)
        .ranks()
        .iter()
        .flatten()
        .copied()
        .collect();
    let b: Vec<f64> = r2
        .restrict(&common)
        .ranks()
        .iter()
        .flatten()
        .copied()
        .collect();
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    const EPS: f64 = 1e-12;
    Ok(match (va < EPS, vb < EPS) {
        (true, true) => Spearman {
            rho: 1.0,
            degenerate: true,
        },
        (true, false) | (false, true) => Spearman {
            rho: 0.0,
            degenerate: true,
        },
        (false, false) => Spearman {
            rho: (cov / (va * vb).sqrt()).clamp(-1.0, 1.0),
            degenerate: false,
        },
    })
}

/// Jaccard index of the two best tiers; 1 when both orders are empty.
pub fn jaccard_best(r1: &WeakOrder, r2: &WeakOrder) -> f64 {
    let (b1, b2) = (r1.best_tier(), r2.best_tier());
    let inter = b1.iter().filter(|i| b2.contains(i)).count();
    let union = b1.len() + b2.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[f64]) -> WeakOrder {
        WeakOrder::from_ranks(&v.iter().map(|&x| Some(x)).collect::<Vec<_>>())
    }

    #[test]
    fn examples() {
        assert_eq!(
            spearman_with_ties(&w(&[1.0, 2.0, 3.0]), &w(&[1.0, 2.0, 3.0]))
                .unwrap()
                .rho,
            1.0
        );
        assert!(
            (spearman_with_ties(&w(&[1.0, 2.0, 3.0, 4.0]), &w(&[4.0, 3.0, 2.0, 1.0]))
                .unwrap()
                .rho
                + 1.0)
                .abs()
                < 1e-12
        );
        let rho = spearman_with_ties(&w(&[1.0, 2.5, 2.5]), &w(&[1.0, 2.0, 3.0]))
            .unwrap()
            .rho;
        assert!((rho - 0.866).abs() < 1e-3, "{rho}");
    }

    #[test]
    fn constant_convention() {
        let s = spearman_with_ties(&w(&[1.0, 1.0]), &w(&[1.0, 1.0])).unwrap();
        assert_eq!((s.rho, s.degenerate), (1.0, true));
        assert_eq!(
            spearman_with_ties(&w(&[1.0, 1.0]), &w(&[1.0, 2.0]))
                .unwrap()
                .rho,
            0.0
        );
    }

    #[test]
    fn pairwise_complete() {
        let a = WeakOrder::from_ranks(&[Some(1.0), None, Some(2.0), Some(3.0)]);
        let b = WeakOrder::from_ranks(&[Some(1.0), Some(2.0), None, Some(3.0)]);
        assert_eq!(spearman_with_ties(&a, &b).unwrap().rho, 1.0);
        let c = WeakOrder::from_ranks(&[None, Some(1.0), Some(2.0), None]);
        assert_eq!(
            spearman_with_ties(&a, &c).unwrap_err(),
            AnalysisError::TooFewCommon
        );
    }

    #[test]
    fn jaccard_examples() {
        // B1 = {0}, B2 = {0, 1}
        assert_eq!(
            jaccard_best(&w(&[1.0, 2.0, 3.0]), &w(&[1.5, 1.5, 3.0])),
            0.5
        );
        assert_eq!(jaccard_best(&w(&[1.0, 2.0]), &w(&[1.0, 3.0])), 1.0);
        assert_eq!(jaccard_best(&w(&[1.0, 2.0]), &w(&[2.0, 1.0])), 0.0);
    }

    proptest! {
        #[test]
        fn symmetric_and_monotone_invariant(q1 in proptest::collection::vec(0u8..6, 2..9), seed in any::<u64>()) {
            let q2: Vec<u8> = q1.iter().enumerate().map(|(i, x)| x.wrapping_add((seed >> (i % 60)) as u8 & 3)).collect();
            let r = |q: &[u8]| WeakOrder::from_scores(&q.iter().map(|&x| Some(f64::from(x))).collect::<Vec<_>>(), true, 6);
            let (a, b) = (r(&q1), r(&q2));
            let ab = spearman_with_ties(&a, &b).unwrap().rho;
            prop_assert_eq!(ab, spearman_with_ties(&b, &a).unwrap().rho);
            prop_assert_eq!(jaccard_best(&a, &b), jaccard_best(&b, &a));
            // strictly monotone transform of the qualities leaves ranks and rho unchanged
            let t = WeakOrder::from_scores(&q1.iter().map(|&x| Some((f64::from(x) / 3.0).exp())).collect::<Vec<_>>(), true, 6);
            prop_assert_eq!(spearman_with_ties(&t, &b).unwrap().rho, ab);
        }
    }
}
