use super::{EncoderError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentifierScheme {
    OneHot,
    Dummy,
    Ordinal,
    Binary,
}

impl IdentifierScheme {
    pub fn width(self, cardinality: usize) -> usize {
        match self {
            Self::OneHot => cardinality,
            Self::Dummy => cardinality.saturating_sub(1),
            Self::Ordinal => 1,
            Self::Binary => binary_width(cardinality),
        }
    }
}

/// `floor(log2 κ) + 1`, the number of base-2 digits of κ.
pub(crate) fn binary_width(cardinality: usize) -> usize {
    (usize::BITS - cardinality.max(1).leading_zeros()) as usize
}

/// Encodes the 1-based level `level` of a domain with `cardinality` levels.
pub fn identifier_encode(
    level: usize,
    cardinality: usize,
    scheme: IdentifierScheme,
) -> Result<Vec<f64>> {
    if level == 0 || level > cardinality {
        return Err(EncoderError::LevelOutOfRange { level, cardinality });
    }
    let mut v = vec![0.0; scheme.width(cardinality)];
    match scheme {
        IdentifierScheme::OneHot => v[level - 1] = 1.0,
        IdentifierScheme::Dummy => {
            if level < cardinality {
                v[level - 1] = 1.0;
            }
        }
        IdentifierScheme::Ordinal => v[0] = level as f64,
        IdentifierScheme::Binary => {
            // most significant digit first
            let w = v.len();
            for (j, slot) in v.iter_mut().enumerate() {
                *slot = ((level >> (w - 1 - j)) & 1) as f64;
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            identifier_encode(2, 3, IdentifierScheme::OneHot).unwrap(),
            vec![0.0, 1.0, 0.0]
        );
        assert_eq!(
            identifier_encode(3, 3, IdentifierScheme::Dummy).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            identifier_encode(3, 4, IdentifierScheme::Binary).unwrap(),
            vec![0.0, 1.0, 1.0]
        );
        assert_eq!(
            identifier_encode(4, 4, IdentifierScheme::Binary).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
        assert_eq!(
            identifier_encode(3, 3, IdentifierScheme::Binary).unwrap(),
            vec![1.0, 1.0]
        );
        assert_eq!(
            identifier_encode(2, 9, IdentifierScheme::Ordinal).unwrap(),
            vec![2.0]
        );
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            identifier_encode(0, 3, IdentifierScheme::OneHot),
            Err(EncoderError::LevelOutOfRange {
                level: 0,
                cardinality: 3
            })
        );
        assert!(identifier_encode(4, 3, IdentifierScheme::Binary).is_err());
    }

    #[test]
    fn binary_widths() {
        for (k, w) in [(1, 1), (2, 2), (3, 2), (4, 3), (7, 3), (8, 4), (1000, 10)] {
            assert_eq!(binary_width(k), w, "kappa={k}");
        }
    }

    #[test]
    fn binary_codes_are_distinct() {
        for k in 1..40 {
            let codes: std::collections::HashSet<Vec<u64>> = (1..=k)
                .map(|l| {
                    identifier_encode(l, k, IdentifierScheme::Binary)
                        .unwrap()
                        .iter()
                        .map(|x| x.to_bits())
                        .collect()
                })
                .collect();
            assert_eq!(codes.len(), k);
        }
    }
}
