/// Per-level counts of rows and positive targets over a set of training rows.
///
/// Rows whose level is `None` count toward the global totals only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub counts: Vec<usize>,
    pub positives: Vec<usize>,
    pub n: usize,
    pub n_pos: usize,
}

impl LevelStats {
    pub fn new(levels: &[Option<usize>], y: &[u8], cardinality: usize) -> Self {
        Self::from_rows(levels, y, cardinality, 0..levels.len())
    }

    /// Statistics restricted to the given row indices.
    pub fn from_rows(
        levels: &[Option<usize>],
        y: &[u8],
        cardinality: usize,
        rows: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut s = Self {
            counts: vec![0; cardinality],
            positives: vec![0; cardinality],
            n: 0,
            n_pos: 0,
        };
        for i in rows {
            let pos = y[i] as usize;
            s.n += 1;
            s.n_pos += pos;
            if let Some(l) = levels[i] {
                s.counts[l] += 1;
                s.positives[l] += pos;
            }
        }
        s
    }

    pub fn cardinality(&self) -> usize {
        self.counts.len()
    }

    /// Global target mean; 0.5 for an empty set of rows.
    pub fn global_mean(&self) -> f64 {
        if self.n == 0 {
            0.5
        } else {
            self.n_pos as f64 / self.n as f64
        }
    }

    pub fn level_mean(&self, level: usize) -> Option<f64> {
        (self.counts[level] > 0).then(|| self.positives[level] as f64 / self.counts[level] as f64)
    }
}

/// Scalar level table with a fallback for unseen levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTable {
    pub values: Vec<f64>,
    pub fallback: f64,
}

impl LevelTable {
    pub fn lookup(&self, level: Option<usize>) -> f64 {
        level
            .and_then(|l| self.values.get(l).copied())
            .unwrap_or(self.fallback)
    }
}

/// Conditional mean of the target per level; unseen levels get the global mean.
pub fn mean_target_table(stats: &LevelStats) -> LevelTable {
    let global = stats.global_mean();
    LevelTable {
        values: (0..stats.cardinality())
            .map(|l| stats.level_mean(l).unwrap_or(global))
            .collect(),
        fallback: global,
    }
}

const WOE_PSEUDO_COUNT: f64 = 0.5;

fn smoothed_logit(pos: usize, n: usize) -> f64 {
    let p = (pos as f64 + WOE_PSEUDO_COUNT) / (n as f64 + 2.0 * WOE_PSEUDO_COUNT);
    (p / (1.0 - p)).ln()
}

/// Weight of evidence: logit of the additively smoothed conditional mean.
pub fn woe_table(stats: &LevelStats) -> LevelTable {
    LevelTable {
        values: (0..stats.cardinality())
            .map(|l| smoothed_logit(stats.positives[l], stats.counts[l]))
            .collect(),
        fallback: smoothed_logit(stats.n_pos, stats.n),
    }
}

/// `(n_l·MT(l) + w·ȳ) / (w + n_l)`; unseen levels get ȳ.
pub fn mean_estimate_table(stats: &LevelStats, weight: f64) -> LevelTable {
    let global = stats.global_mean();
    let values = (0..stats.cardinality())
        .map(|l| {
            let n_l = stats.counts[l] as f64;
            if n_l + weight == 0.0 {
                global
            } else {
                (stats.positives[l] as f64 + weight * global) / (weight + n_l)
            }
        })
        .collect();
    LevelTable {
        values,
        fallback: global,
    }
}

/// Maps every value in [0, 1] to the lower bound of its bin among `bins`
/// equal-width intervals; 1.0 belongs to the last bin. The fallback is kept.
pub fn discretize_mt(table: &LevelTable, bins: usize) -> LevelTable {
    let b = bins.max(1);
    let lower = |v: f64| {
        let idx = ((v.clamp(0.0, 1.0) * b as f64).floor() as usize).min(b - 1);
        idx as f64 / b as f64
    };
    LevelTable {
        values: table.values.iter().map(|&v| lower(v)).collect(),
        fallback: table.fallback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn mean_target_example() {
        // A=[a,a,b], y=[1,0,1]
        let s = LevelStats::new(&[Some(0), Some(0), Some(1)], &[1, 0, 1], 2);
        let t = mean_target_table(&s);
        assert_eq!(t.values, vec![0.5, 1.0]);
        assert!(close(t.fallback, 2.0 / 3.0));
        assert!(close(t.lookup(None), 2.0 / 3.0));
        assert!(close(t.lookup(Some(7)), 2.0 / 3.0));
    }

    #[test]
    fn constant_target() {
        let s = LevelStats::new(&[Some(0), Some(1), Some(2)], &[1, 1, 1], 3);
        assert_eq!(mean_target_table(&s).values, vec![1.0; 3]);
    }

    #[test]
    fn woe_examples() {
        let s = LevelStats::new(&[Some(0), Some(0)], &[1, 1], 1);
        assert!(close(woe_table(&s).values[0], 5f64.ln()));
        let half = LevelStats::new(&[Some(0), Some(0)], &[1, 0], 1);
        assert!(close(woe_table(&half).values[0], 0.0));
        let neg = LevelStats::new(&[Some(0), Some(0)], &[0, 0], 1);
        assert!(close(woe_table(&neg).values[0], -(5f64.ln())));
    }

    #[test]
    fn mean_estimate_examples() {
        // level a: n=2, MT 0.5; ȳ = 2/3
        let s = LevelStats::new(&[Some(0), Some(0), Some(1)], &[1, 0, 1], 2);
        assert!(close(mean_estimate_table(&s, 1.0).values[0], 5.0 / 9.0));
        assert_eq!(
            mean_estimate_table(&s, 0.0).values,
            mean_target_table(&s).values
        );
        let unseen = LevelStats::from_rows(&[Some(0), Some(1)], &[1, 0], 2, [0]);
        assert_eq!(mean_estimate_table(&unseen, 0.0).values[1], 1.0);
    }

    #[test]
    fn discretization() {
        let t = LevelTable {
            values: vec![0.12, 0.48, 0.91],
            fallback: 0.3,
        };
        assert_eq!(discretize_mt(&t, 2).values, vec![0.0, 0.0, 0.5]);
        assert_eq!(discretize_mt(&t, 1).values, vec![0.0; 3]);
        let edge = LevelTable {
            values: vec![0.5, 1.0, 0.0],
            fallback: 0.0,
        };
        assert_eq!(discretize_mt(&edge, 2).values, vec![0.5, 0.5, 0.0]);
        assert_eq!(discretize_mt(&edge, 10).values, vec![0.5, 0.9, 0.0]);
    }
}
