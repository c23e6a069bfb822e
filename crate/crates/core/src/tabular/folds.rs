use rand::seq::SliceRandom;

use super::{Result, TabularError};
use crate::util::rng;

/// Assignment of rows to `k` folds (fold ids are `0..k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub seed: u64,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified k-fold assignment: each class is shuffled and dealt round-robin,
/// continuing the rotation across classes so fold sizes differ by at most one.
///
/// Both classes must be present and `k <= n`. A class with fewer than `k`
/// members is spread over as many folds as it has members.
pub fn stratified_folds(y: &[u8], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(TabularError::InvalidFoldCount(k));
    }
    let mut rng = rng(seed);
    let mut order = Vec::with_capacity(y.len());
    for class in [0u8, 1u8] {
        let mut members: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if members.is_empty() || y.len() < k {
            return Err(TabularError::TooFewClassMembers {
                class,
                count: members.len(),
                k,
            });
        }
        members.shuffle(&mut rng);
        order.extend(members);
    }
    let mut assignment = vec![0; y.len()];
    for (pos, &row) in order.iter().enumerate() {
        assignment[row] = pos % k;
    }
    Ok(FoldAssignment {
        k,
        assignment,
        seed,
    })
}

/// Unstratified random partition into `k` folds of (nearly) equal size.
pub fn random_folds(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(TabularError::InvalidFoldCount(k));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng(seed));
    let mut assignment = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        assignment[row] = pos % k;
    }
    Ok(FoldAssignment {
        k,
        assignment,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_by_two() {
        let f = stratified_folds(&[1, 1, 0, 0], 2, 7).unwrap();
        for fold in 0..2 {
            let mut labels: Vec<u8> = f
                .test_indices(fold)
                .iter()
                .map(|&i| [1, 1, 0, 0][i])
                .collect();
            labels.sort();
            assert_eq!(labels, vec![0, 1]);
        }
    }

    #[test]
    fn leave_one_out() {
        let y = [0, 1, 0, 1];
        let f = stratified_folds(&y, 4, 3).unwrap();
        assert_eq!(f.fold_sizes(), vec![1; 4]);
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(
            stratified_folds(&[1, 1, 1, 1], 2, 0),
            Err(TabularError::TooFewClassMembers {
                class: 0,
                count: 0,
                k: 2
            })
        ));
        assert!(matches!(
            stratified_folds(&[1, 0], 1, 0),
            Err(TabularError::InvalidFoldCount(1))
        ));
    }

    proptest! {
        #[test]
        fn stratification_bounds(y in proptest::collection::vec(0u8..2, 4..200), k in 2usize..8, seed in any::<u64>()) {
            let ones = y.iter().filter(|&&v| v == 1).count();
            let zeros = y.len() - ones;
            prop_assume!(ones >= 1 && zeros >= 1 && y.len() >= k);
            let f = stratified_folds(&y, k, seed).unwrap();
            prop_assert_eq!(&f, &stratified_folds(&y, k, seed).unwrap());
            let sizes = f.fold_sizes();
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            let p = ones as f64 / y.len() as f64;
            for fold in 0..k {
                let idx = f.test_indices(fold);
                let pos = idx.iter().filter(|&&i| y[i] == 1).count() as f64;
                let size = idx.len() as f64;
                prop_assert!((pos / size - p).abs() <= 1.0 / size + 1e-12);
            }
        }
    }
}
