use super::{EncoderError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContrastScheme {
    Sum,
    BackwardDifference,
    Helmert,
}

/// Contrast coding of the 1-based `level` among `cardinality` levels, without
/// intercept. Over all levels the vectors sum to zero.
pub fn contrast_encode(
    level: usize,
    cardinality: usize,
    scheme: ContrastScheme,
) -> Result<Vec<f64>> {
    if cardinality < 2 {
        return Err(EncoderError::DegenerateCardinality);
    }
    if level == 0 || level > cardinality {
        return Err(EncoderError::LevelOutOfRange { level, cardinality });
    }
    let k = cardinality as f64;
    let v = (1..cardinality)
        .map(|j| match scheme {
            ContrastScheme::Sum => {
                if level == cardinality {
                    -1.0
                } else if level == j {
                    1.0
                } else {
                    0.0
                }
            }
            // levels 1..=j get -(κ-j)/κ, the rest j/κ
            ContrastScheme::BackwardDifference => {
                if level <= j {
                    -(k - j as f64) / k
                } else {
                    j as f64 / k
                }
            }
            ContrastScheme::Helmert => {
                let jf = j as f64;
                if level <= j {
                    -1.0 / (jf + 1.0)
                } else if level == j + 1 {
                    jf / (jf + 1.0)
                } else {
                    0.0
                }
            }
        })
        .collect();
    Ok(v)
}
