use std::collections::HashSet;

use super::{EncoderError, Result};
use crate::util::splitmix64;

pub const DEFAULT_MINHASH_COMPONENTS: usize = 30;
pub const DEFAULT_GRAM: usize = 3;
/// Global salt seed; fixed so encodings of a string never depend on the data split.
pub const MINHASH_SEED: u64 = 0x6d69_6e68_6173_6821;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0100_0000_01b3;

/// Character n-grams of `s`. Strings shorter than `n` characters yield the
/// whole string as their only gram.
fn grams(s: &str, n: usize) -> Vec<String> {
    let chars: Vec<char> = s.chars().collect();
    if chars.len() <= n {
        return vec![s.to_string()];
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Jaccard similarity of the character n-gram sets of two strings.
pub fn gram_jaccard(a: &str, b: &str, n: usize) -> f64 {
    let ga: HashSet<String> = grams(a, n).into_iter().collect();
    let gb: HashSet<String> = grams(b, n).into_iter().collect();
    let inter = ga.intersection(&gb).count();
    let union = ga.union(&gb).count();
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// A family of `components` salted 64-bit hash functions over character n-grams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinHasher {
    gram: usize,
    salts: Vec<u64>,
}

impl MinHasher {
    pub fn new(components: usize, gram: usize, seed: u64) -> Self {
        let mut state = seed;
        let salts = (0..components)
            .map(|_| {
                state = splitmix64(state);
                state
            })
            .collect();
        Self { gram, salts }
    }

    pub fn components(&self) -> usize {
        self.salts.len()
    }

    /// Component j is the minimum of the j-th hash over the string's grams,
    /// scaled to [0, 1).
    pub fn encode(&self, s: &str) -> Result<Vec<f64>> {
        if s.is_empty() {
            return Err(EncoderError::EmptyString);
        }
        let base: Vec<u64> = grams(s, self.gram).iter().map(|g| fnv1a(g)).collect();
        Ok(self
            .salts
            .iter()
            .map(|&salt| {
                let m = base
                    .iter()
                    .map(|&h| splitmix64(h ^ salt))
                    .min()
                    .expect("at least one gram");
                m as f64 / 18_446_744_073_709_551_616.0
            })
            .collect())
    }
}

/// Min-hash signature of a single string with the global seed.
pub fn minhash_encode(s: &str, components: usize, gram: usize) -> Result<Vec<f64>> {
    if components == 0 || gram == 0 {
        return Err(EncoderError::InvalidParameter(
            "MinHash needs components >= 1 and gram >= 1".into(),
        ));
    }
    MinHasher::new(components, gram, MINHASH_SEED).encode(s)
}
