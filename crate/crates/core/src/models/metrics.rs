use super::spec::MetricKind;
use super::{ModelError, Result};

/// Quality of `scores` against binary `y_true`; hard labels are `score >= 0.5`.
///
/// BAcc and AUC need both classes in `y_true`. F1 is 0 when the positive
/// class is never predicted correctly (this also covers undefined precision
/// or recall).
pub fn compute_metric(metric: MetricKind, y_true: &[u8], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(ModelError::LengthMismatch(scores.len(), y_true.len()));
    }
    if y_true.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&y, &s) in y_true.iter().zip(scores) {
        match (y == 1, s >= 0.5) {
            (true, true) => tp += 1,
            (false, false) => tn += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
        }
    }
    let pos = tp + fn_;
    let neg = tn + fp;
    match metric {
        MetricKind::Acc => Ok((tp + tn) as f64 / y_true.len() as f64),
        MetricKind::BAcc => {
            if pos == 0 || neg == 0 {
                return Err(ModelError::UndefinedMetric(metric));
            }
            Ok((tp as f64 / pos as f64 + tn as f64 / neg as f64) / 2.0)
        }
        MetricKind::F1 => Ok(if tp == 0 {
            0.0
        } else {
            2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
        }),
        MetricKind::AUC => {
            if pos == 0 || neg == 0 {
                return Err(ModelError::UndefinedMetric(metric));
            }
            Ok(mann_whitney_auc(y_true, scores, pos, neg))
        }
    }
}

/// Rank-sum AUC with average ranks for tied scores.
fn mann_whitney_auc(y: &[u8], scores: &[f64], pos: usize, neg: usize) -> f64 {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += avg * order[i..=j].iter().filter(|&&k| y[k] == 1).count() as f64;
        i = j + 1;
    }
    let (p, n) = (pos as f64, neg as f64);
    (rank_sum - p * (p + 1.0) / 2.0) / (p * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Pairwise definition: P(s+ > s-) + 0.5 P(s+ = s-).
    fn auc_pairs(y: &[u8], s: &[f64]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..y.len() {
            for j in 0..y.len() {
                if y[i] == 1 && y[j] == 0 {
                    den += 1.0;
                    num += if s[i] > s[j] {
                        1.0
                    } else if s[i] == s[j] {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        num / den
    }

    #[test]
    fn hand_examples() {
        assert_eq!(
            compute_metric(MetricKind::Acc, &[1, 0], &[1.0, 1.0]).unwrap(),
            0.5
        );
        assert_eq!(
            compute_metric(MetricKind::BAcc, &[1, 1, 0], &[1.0, 1.0, 1.0]).unwrap(),
            0.5
        );
        assert_eq!(
            compute_metric(MetricKind::AUC, &[0, 0, 1, 1], &[0.1, 0.2, 0.3, 0.9]).unwrap(),
            1.0
        );
        assert_eq!(
            compute_metric(MetricKind::AUC, &[0, 1, 0, 1], &[0.4; 4]).unwrap(),
            0.5
        );
        // tp=1 fp=1 fn=1 -> 2/4
        assert_eq!(
            compute_metric(MetricKind::F1, &[1, 0, 1], &[0.9, 0.8, 0.1]).unwrap(),
            0.5
        );
        assert_eq!(
            compute_metric(MetricKind::F1, &[0, 0], &[0.1, 0.1]).unwrap(),
            0.0
        );
    }

    #[test]
    fn single_class_undefined() {
        for m in [MetricKind::BAcc, MetricKind::AUC] {
            assert_eq!(
                compute_metric(m, &[1, 1], &[0.2, 0.9]).unwrap_err(),
                ModelError::UndefinedMetric(m)
            );
        }
        assert!(compute_metric(MetricKind::Acc, &[1, 1], &[0.2, 0.9]).is_ok());
    }

    proptest! {
        #[test]
        fn auc_matches_pairwise_definition(v in proptest::collection::vec((0u8..2, 0u8..6), 2..40)) {
            let y: Vec<u8> = v.iter().map(|p| p.0).collect();
            prop_assume!(y.contains(&0) && y.contains(&1));
            let s: Vec<f64> = v.iter().map(|p| f64::from(p.1) / 5.0).collect();
            let auc = compute_metric(MetricKind::AUC, &y, &s).unwrap();
            prop_assert!((auc - auc_pairs(&y, &s)).abs() < 1e-12);
            let t: Vec<f64> = s.iter().map(|x| (3.0 * x).exp() / 100.0).collect();
            prop_assert!((compute_metric(MetricKind::AUC, &y, &t).unwrap() - auc).abs() < 1e-12);
        }

        #[test]
        fn metrics_in_unit_interval(v in proptest::collection::vec((0u8..2, 0.0f64..1.0), 2..40)) {
            let y: Vec<u8> = v.iter().map(|p| p.0).collect();
            let s: Vec<f64> = v.iter().map(|p| p.1).collect();
            for m in MetricKind::ALL {
                if let Ok(q) = compute_metric(m, &y, &s) {
                    prop_assert!((0.0..=1.0).contains(&q));
                }
            }
        }

        #[test]
        fn acc_equals_bacc_when_balanced(v in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..20)) {
            let y: Vec<u8> = v.iter().flat_map(|_| [1, 0]).collect();
            let s: Vec<f64> = v.iter().flat_map(|p| [p.0, p.1]).collect();
            let acc = compute_metric(MetricKind::Acc, &y, &s).unwrap();
            prop_assert!((acc - compute_metric(MetricKind::BAcc, &y, &s).unwrap()).abs() < 1e-12);
        }
    }
}
