use super::glmm::glmm_fit;
use super::target::{mean_target_table, LevelStats, LevelTable};
use super::Result;
use crate::tabular::FoldAssignment;

/// Base encoder refitted per fold by the cross-validated and BlowUp families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetBase {
    MeanTarget,
    Glmm,
}

impl TargetBase {
    pub fn fit_table(self, stats: &LevelStats) -> Result<LevelTable> {
        match self {
            Self::MeanTarget => Ok(mean_target_table(stats)),
            Self::Glmm => Ok(glmm_fit(stats)?.table()),
        }
    }
}

/// Ordered target statistics: the row at permuted position `p` is encoded with
/// `(Σ earlier same-level targets + ȳ) / (earlier count + 1)`.
///
/// `permutation[p]` is the row visited at position `p`.
pub fn catboost_train_values(
    levels: &[Option<usize>],
    y: &[u8],
    cardinality: usize,
    permutation: &[usize],
) -> Vec<f64> {
    let prior = LevelStats::new(levels, y, cardinality).global_mean();
    let mut sums = vec![0.0; cardinality];
    let mut counts = vec![0usize; cardinality];
    let mut out = vec![prior; levels.len()];
    for &row in permutation {
        if let Some(l) = levels[row] {
            out[row] = (sums[l] + prior) / (counts[l] as f64 + 1.0);
            sums[l] += y[row] as f64;
            counts[l] += 1;
        }
    }
    out
}

/// Transform-time CatBoost table: the prior-smoothed mean over all training rows.
pub fn catboost_table(stats: &LevelStats) -> LevelTable {
    let prior = stats.global_mean();
    LevelTable {
        values: (0..stats.cardinality())
            .map(|l| (stats.positives[l] as f64 + prior) / (stats.counts[l] as f64 + 1.0))
            .collect(),
        fallback: prior,
    }
}

/// Out-of-fold encoding: every row is encoded by `base` fitted on the other folds.
pub fn cv_train_values(
    levels: &[Option<usize>],
    y: &[u8],
    cardinality: usize,
    folds: &FoldAssignment,
    base: TargetBase,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; levels.len()];
    for f in 0..folds.k {
        let stats = LevelStats::from_rows(levels, y, cardinality, folds.train_indices(f));
        let table = base.fit_table(&stats)?;
        for i in folds.test_indices(f) {
            out[i] = table.lookup(levels[i]);
        }
    }
    Ok(out)
}

/// One table per fold, each fitted on that fold alone.
pub fn blowup_tables(
    levels: &[Option<usize>],
    y: &[u8],
    cardinality: usize,
    folds: &FoldAssignment,
    base: TargetBase,
) -> Result<Vec<LevelTable>> {
    (0..folds.k)
        .map(|f| {
            base.fit_table(&LevelStats::from_rows(
                levels,
                y,
                cardinality,
                folds.test_indices(f),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn catboost_identity_permutation() {
        let a = [Some(0); 3];
        let v = catboost_train_values(&a, &[1, 0, 1], 1, &[0, 1, 2]);
        assert!(close(&v, &[2.0 / 3.0, 5.0 / 6.0, 5.0 / 9.0]));
    }

    #[test]
    fn catboost_reversed_permutation() {
        let a = [Some(0); 3];
        let v = catboost_train_values(&a, &[1, 0, 1], 1, &[2, 1, 0]);
        // row 2 sees nothing, row 1 sees row 2, row 0 sees rows 2 and 1
        assert!(close(&v, &[5.0 / 9.0, 5.0 / 6.0, 2.0 / 3.0]));
    }

    #[test]
    fn catboost_first_occurrence_is_prior() {
        let a = [Some(0), Some(1), Some(0), Some(1)];
        let y = [1, 1, 0, 0];
        let v = catboost_train_values(&a, &y, 2, &[3, 2, 1, 0]);
        assert_eq!(v[3], 0.5);
        assert_eq!(v[2], 0.5);
        let t = catboost_table(&LevelStats::new(&a, &y, 2));
        assert!(close(&t.values, &[1.5 / 3.0, 1.5 / 3.0]));
        assert_eq!(t.fallback, 0.5);
    }

    #[test]
    fn cv_complementary_folds() {
        let folds = FoldAssignment {
            k: 2,
            assignment: vec![0, 0, 1, 1],
            seed: 0,
        };
        let v = cv_train_values(
            &[Some(0); 4],
            &[1, 1, 0, 0],
            1,
            &folds,
            TargetBase::MeanTarget,
        )
        .unwrap();
        assert_eq!(v, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn cv_level_confined_to_one_fold() {
        // level 1 only in fold 0 -> its fold-0 rows get the fold-1 target mean
        let folds = FoldAssignment {
            k: 2,
            assignment: vec![0, 0, 1, 1],
            seed: 0,
        };
        let a = [Some(0), Some(1), Some(0), Some(0)];
        let v = cv_train_values(&a, &[1, 1, 0, 1], 2, &folds, TargetBase::MeanTarget).unwrap();
        assert_eq!(v[1], 0.5);
    }

    #[test]
    fn blowup_per_fold_tables() {
        let folds = FoldAssignment {
            k: 2,
            assignment: vec![0, 1, 0, 1],
            seed: 0,
        };
        let a = [Some(0), Some(0), Some(1), Some(1)];
        let t = blowup_tables(&a, &[1, 0, 1, 0], 2, &folds, TargetBase::MeanTarget).unwrap();
        assert_eq!(t[0].values, vec![1.0, 1.0]);
        assert_eq!(t[1].values, vec![0.0, 0.0]);
    }
}
