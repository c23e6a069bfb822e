use super::target::{LevelStats, LevelTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyMode {
    Count,
    Frequency,
}

/// Absolute or relative training frequency of each level; unseen levels map to 0.
pub fn frequency_encode(stats: &LevelStats, mode: FrequencyMode) -> LevelTable {
    let n = stats.n.max(1) as f64;
    let values = stats
        .counts
        .iter()
        .map(|&c| match mode {
            FrequencyMode::Count => c as f64,
            FrequencyMode::Frequency => c as f64 / n,
        })
        .collect();
    LevelTable {
        values,
        fallback: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_frequencies() {
        let stats = LevelStats::new(&[Some(0), Some(0), Some(1)], &[0, 0, 0], 2);
        assert_eq!(
            frequency_encode(&stats, FrequencyMode::Count).values,
            vec![2.0, 1.0]
        );
        assert_eq!(
            frequency_encode(&stats, FrequencyMode::Frequency).values,
            vec![2.0 / 3.0, 1.0 / 3.0]
        );
        let single = LevelStats::new(&[Some(0); 4], &[1, 0, 1, 1], 1);
        assert_eq!(
            frequency_encode(&single, FrequencyMode::Frequency).values,
            vec![1.0]
        );
        assert_eq!(
            frequency_encode(&single, FrequencyMode::Count).fallback,
            0.0
        );
    }
}
