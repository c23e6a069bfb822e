use std::collections::HashMap;

use rand::seq::SliceRandom;

use super::binning::prebin_partition;
use super::constrained::{
    blowup_tables, catboost_table, catboost_train_values, cv_train_values, TargetBase,
};
use super::contrast::{contrast_encode, ContrastScheme};
use super::frequency::{frequency_encode, FrequencyMode};
use super::glmm::glmm_fit;
use super::identifier::{identifier_encode, IdentifierScheme};
use super::minhash::{MinHasher, MINHASH_SEED};
use super::spec::EncoderSpec;
use super::target::{
    discretize_mt, mean_estimate_table, mean_target_table, woe_table, LevelStats, LevelTable,
};
use super::{EncoderError, Result};
use crate::matrix::Matrix;
use crate::tabular::random_folds;
use crate::util::rng;

/// Training levels in order of first appearance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Domain {
    levels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Domain {
    pub fn from_values<'a>(values: impl IntoIterator<Item = Option<&'a str>>) -> Self {
        let mut d = Domain::default();
        for v in values.into_iter().flatten() {
            if !d.index.contains_key(v) {
                d.index.insert(v.to_string(), d.levels.len());
                d.levels.push(v.to_string());
            }
        }
        d
    }

    pub fn index_of(&self, level: &str) -> Option<usize> {
        self.index.get(level).copied()
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Mapping {
    /// Row-major κ × width table.
    Table {
        width: usize,
        rows: Vec<f64>,
        fallback: Vec<f64>,
    },
    MinHash(MinHasher),
}

/// A trained level → vector mapping for one categorical attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedEncoder {
    spec: EncoderSpec,
    domain: Domain,
    mapping: Mapping,
}

fn scalar_mapping(table: LevelTable) -> Mapping {
    Mapping::Table {
        width: 1,
        rows: table.values,
        fallback: vec![table.fallback],
    }
}

fn vector_mapping(
    width: usize,
    cardinality: usize,
    f: impl Fn(usize) -> Result<Vec<f64>>,
) -> Result<Mapping> {
    let mut rows = Vec::with_capacity(width * cardinality);
    for l in 0..cardinality {
        rows.extend(f(l)?);
    }
    Ok(Mapping::Table {
        width,
        rows,
        fallback: vec![0.0; width],
    })
}

fn base_of(spec: &EncoderSpec) -> TargetBase {
    match spec {
        EncoderSpec::CvGlmm { .. } | EncoderSpec::BlowUpGlmm { .. } => TargetBase::Glmm,
        _ => TargetBase::MeanTarget,
    }
}

impl FittedEncoder {
    /// Fits on training values and returns the encoder with the training encoding.
    ///
    /// For CatBoost and the cross-validated families the training encoding
    /// differs from `transform` of the same rows: it only uses targets of
    /// earlier rows in a seeded permutation, or of the other folds.
    pub fn fit(
        spec: &EncoderSpec,
        values: &[Option<&str>],
        target: Option<&[u8]>,
        seed: u64,
    ) -> Result<(Self, Matrix)> {
        spec.validate()?;
        let domain = Domain::from_values(values.iter().copied());
        let kappa = domain.len();
        let local: Vec<Option<usize>> = values
            .iter()
            .map(|v| v.and_then(|s| domain.index_of(s)))
            .collect();
        let y = match (spec.is_supervised(), target) {
            (true, None) => return Err(EncoderError::MissingTarget),
            (_, Some(t)) if t.len() != values.len() => {
                return Err(EncoderError::InvalidParameter(format!(
                    "target has {} rows, attribute has {}",
                    t.len(),
                    values.len()
                )))
            }
            (_, t) => t.unwrap_or(&[]),
        };
        let stats = || LevelStats::new(&local, y, kappa);
        let zeros = vec![0u8; values.len()];
        let unsupervised_stats = || LevelStats::new(&local, &zeros, kappa);

        let mut train_override: Option<Vec<f64>> = None;
        let mapping = match *spec {
            EncoderSpec::OneHot
            | EncoderSpec::Dummy
            | EncoderSpec::Ordinal
            | EncoderSpec::Binary => {
                let scheme = match spec {
                    EncoderSpec::OneHot => IdentifierScheme::OneHot,
                    EncoderSpec::Dummy => IdentifierScheme::Dummy,
                    EncoderSpec::Ordinal => IdentifierScheme::Ordinal,
                    _ => IdentifierScheme::Binary,
                };
                vector_mapping(scheme.width(kappa), kappa, |l| {
                    identifier_encode(l + 1, kappa, scheme)
                })?
            }
            EncoderSpec::Count => scalar_mapping(frequency_encode(
                &unsupervised_stats(),
                FrequencyMode::Count,
            )),
            EncoderSpec::Frequency => scalar_mapping(frequency_encode(
                &unsupervised_stats(),
                FrequencyMode::Frequency,
            )),
            EncoderSpec::Sum | EncoderSpec::BackwardDifference | EncoderSpec::Helmert => {
                let scheme = match spec {
                    EncoderSpec::Sum => ContrastScheme::Sum,
                    EncoderSpec::BackwardDifference => ContrastScheme::BackwardDifference,
                    _ => ContrastScheme::Helmert,
                };
                if kappa < 2 {
                    return Err(EncoderError::DegenerateCardinality);
                }
                vector_mapping(kappa - 1, kappa, |l| contrast_encode(l + 1, kappa, scheme))?
            }
            EncoderSpec::MinHash { components, gram } => {
                Mapping::MinHash(MinHasher::new(components, gram, MINHASH_SEED))
            }
            EncoderSpec::MeanTarget => scalar_mapping(mean_target_table(&stats())),
            EncoderSpec::WoE => scalar_mapping(woe_table(&stats())),
            EncoderSpec::PreBinnedMT { threshold } => {
                let s = stats();
                let total: usize = s.counts.iter().sum();
                let freqs: Vec<f64> = s
                    .counts
                    .iter()
                    .map(|&c| c as f64 / total.max(1) as f64)
                    .collect();
                let partition = prebin_partition(&freqs, threshold);
                let bucket_of = partition.bucket_of(kappa);
                let binned: Vec<Option<usize>> =
                    local.iter().map(|l| l.map(|l| bucket_of[l])).collect();
                let bucket_table =
                    mean_target_table(&LevelStats::new(&binned, y, partition.count()));
                scalar_mapping(LevelTable {
                    values: bucket_of.iter().map(|&b| bucket_table.values[b]).collect(),
                    fallback: bucket_table.fallback,
                })
            }
            EncoderSpec::DiscretizedMT { bins } => {
                scalar_mapping(discretize_mt(&mean_target_table(&stats()), bins))
            }
            EncoderSpec::MeanEstimate { weight } => {
                scalar_mapping(mean_estimate_table(&stats(), weight))
            }
            EncoderSpec::Glmm => scalar_mapping(glmm_fit(&stats())?.table()),
            EncoderSpec::CatBoost => {
                let mut perm: Vec<usize> = (0..values.len()).collect();
                perm.shuffle(&mut rng(seed));
                train_override = Some(catboost_train_values(&local, y, kappa, &perm));
                scalar_mapping(catboost_table(&stats()))
            }
            EncoderSpec::CvMT { folds: k } | EncoderSpec::CvGlmm { folds: k } => {
                let base = base_of(spec);
                let folds = split(values.len(), k, seed)?;
                train_override = Some(cv_train_values(&local, y, kappa, &folds, base)?);
                scalar_mapping(base.fit_table(&stats())?)
            }
            EncoderSpec::BlowUpMT { folds: k } | EncoderSpec::BlowUpGlmm { folds: k } => {
                let folds = split(values.len(), k, seed)?;
                let tables = blowup_tables(&local, y, kappa, &folds, base_of(spec))?;
                let mut rows = Vec::with_capacity(kappa * k);
                for l in 0..kappa {
                    rows.extend(tables.iter().map(|t| t.values[l]));
                }
                Mapping::Table {
                    width: k,
                    rows,
                    fallback: tables.iter().map(|t| t.fallback).collect(),
                }
            }
            EncoderSpec::Drop => Mapping::Table {
                width: 1,
                rows: vec![1.0; kappa],
                fallback: vec![1.0],
            },
        };

        let fitted = FittedEncoder {
            spec: spec.clone(),
            domain,
            mapping,
        };
        let train = match train_override {
            Some(v) => Matrix::from_rows(v.len(), 1, v),
            None => fitted.transform(values),
        };
        if !train.is_finite() {
            return Err(EncoderError::FitDiverged(format!(
                "{spec} produced non-finite values"
            )));
        }
        Ok((fitted, train))
    }

    pub fn spec(&self) -> &EncoderSpec {
        &self.spec
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Output width `d`.
    pub fn width(&self) -> usize {
        match &self.mapping {
            Mapping::Table { width, .. } => *width,
            Mapping::MinHash(h) => h.components(),
        }
    }

    /// Vector for unseen levels (and missing cells).
    pub fn fallback(&self) -> Vec<f64> {
        match &self.mapping {
            Mapping::Table { fallback, .. } => fallback.clone(),
            Mapping::MinHash(h) => vec![0.0; h.components()],
        }
    }

    /// Encoding of a single level value; `None` means missing.
    pub fn encode_level(&self, level: Option<&str>) -> Vec<f64> {
        match (&self.mapping, level) {
            (Mapping::Table { width, rows, .. }, Some(s)) => match self.domain.index_of(s) {
                Some(l) => rows[l * width..(l + 1) * width].to_vec(),
                None => self.fallback(),
            },
            (Mapping::MinHash(h), Some(s)) => h.encode(s).unwrap_or_else(|_| self.fallback()),
            (_, None) => self.fallback(),
        }
    }

    pub fn transform(&self, values: &[Option<&str>]) -> Matrix {
        let d = self.width();
        let mut data = Vec::with_capacity(values.len() * d);
        let mut cache: HashMap<&str, Vec<f64>> = HashMap::new();
        for v in values {
            match v {
                Some(s) => data.extend_from_slice(
                    cache.entry(s).or_insert_with(|| self.encode_level(Some(s))),
                ),
                None => data.extend(self.fallback()),
            }
        }
        Matrix::from_rows(values.len(), d, data)
    }
}

fn split(n: usize, k: usize, seed: u64) -> Result<crate::tabular::FoldAssignment> {
    if n < k {
        return Err(EncoderError::InvalidParameter(format!(
            "{k} folds need at least {k} training rows, got {n}"
        )));
    }
    random_folds(n, k, seed).map_err(|e| EncoderError::InvalidParameter(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals<'a>(v: &[&'a str]) -> Vec<Option<&'a str>> {
        v.iter().map(|s| Some(*s)).collect()
    }

    #[test]
    fn width_contract() {
        let a = vals(&["a", "b", "c", "a", "d", "e", "b", "a", "c", "e"]);
        let y = [1, 0, 1, 0, 1, 0, 0, 1, 1, 0];
        let kappa = 5;
        for spec in EncoderSpec::full_grid() {
            let (fitted, train) = FittedEncoder::fit(&spec, &a, Some(&y), 3).unwrap();
            let expected = match spec {
                EncoderSpec::OneHot => kappa,
                EncoderSpec::Dummy
                | EncoderSpec::Sum
                | EncoderSpec::Helmert
                | EncoderSpec::BackwardDifference => kappa - 1,
                EncoderSpec::Binary => 3,
                EncoderSpec::MinHash { components, .. } => components,
                EncoderSpec::BlowUpMT { folds } | EncoderSpec::BlowUpGlmm { folds } => folds,
                _ => 1,
            };
            assert_eq!(fitted.width(), expected, "{spec}");
            assert_eq!(train.cols(), expected, "{spec}");
            assert_eq!(train.rows(), a.len());
            let test = fitted.transform(&vals(&["a", "zzz"]));
            assert_eq!(test.cols(), expected);
            assert!(test.is_finite());
        }
    }

    #[test]
    fn unseen_level_fallbacks() {
        let a = vals(&["a", "a", "b"]);
        let y = [1, 0, 1];
        let unseen = |spec: EncoderSpec| {
            FittedEncoder::fit(&spec, &a, Some(&y), 0)
                .unwrap()
                .0
                .encode_level(Some("new"))
        };
        assert_eq!(unseen(EncoderSpec::OneHot), vec![0.0, 0.0]);
        assert_eq!(unseen(EncoderSpec::Ordinal), vec![0.0]);
        assert_eq!(unseen(EncoderSpec::Count), vec![0.0]);
        assert_eq!(unseen(EncoderSpec::Sum), vec![0.0]);
        assert_eq!(unseen(EncoderSpec::MeanTarget), vec![2.0 / 3.0]);
        assert_eq!(
            unseen(EncoderSpec::MeanEstimate { weight: 1.0 }),
            vec![2.0 / 3.0]
        );
        assert_eq!(unseen(EncoderSpec::Drop), vec![1.0]);
        assert_eq!(unseen(EncoderSpec::CatBoost), vec![2.0 / 3.0]);
        let mh = FittedEncoder::fit(
            &EncoderSpec::MinHash {
                components: 8,
                gram: 3,
            },
            &a,
            None,
            0,
        )
        .unwrap()
        .0;
        assert_eq!(
            mh.encode_level(Some("new")),
            MinHasher::new(8, 3, MINHASH_SEED).encode("new").unwrap()
        );
    }

    #[test]
    fn level_order_is_first_appearance() {
        let (f, m) =
            FittedEncoder::fit(&EncoderSpec::Ordinal, &vals(&["z", "a", "z", "m"]), None, 0)
                .unwrap();
        assert_eq!(f.domain().levels(), &["z", "a", "m"]);
        assert_eq!(m.column(0), vec![1.0, 2.0, 1.0, 3.0]);
    }

    #[test]
    fn drop_is_constant() {
        let (_, m) =
            FittedEncoder::fit(&EncoderSpec::Drop, &vals(&["a", "b", "c"]), None, 0).unwrap();
        assert_eq!(m.column(0), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn supervised_needs_target() {
        assert_eq!(
            FittedEncoder::fit(&EncoderSpec::WoE, &vals(&["a"]), None, 0).unwrap_err(),
            EncoderError::MissingTarget
        );
    }

    #[test]
    fn contrast_needs_two_levels() {
        assert_eq!(
            FittedEncoder::fit(&EncoderSpec::Helmert, &vals(&["a", "a"]), None, 0).unwrap_err(),
            EncoderError::DegenerateCardinality
        );
    }

    #[test]
    fn prebinned_buckets_share_means() {
        // freqs a .5, b .3, c .15, d .05 over 20 rows; c and d share a bucket
        let mut a = Vec::new();
        let mut y = Vec::new();
        for (lvl, n, pos) in [("a", 10, 5), ("b", 6, 6), ("c", 3, 3), ("d", 1, 0)] {
            for i in 0..n {
                a.push(Some(lvl));
                y.push(u8::from(i < pos));
            }
        }
        let (f, _) = FittedEncoder::fit(
            &EncoderSpec::PreBinnedMT { threshold: 0.2 },
            &a,
            Some(&y),
            0,
        )
        .unwrap();
        assert_eq!(f.encode_level(Some("c")), vec![0.75]);
        assert_eq!(f.encode_level(Some("d")), vec![0.75]);
        assert_eq!(f.encode_level(Some("a")), vec![0.5]);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = vals(&["a", "b", "a", "c", "b", "a", "c", "c"]);
        let y = [1, 0, 1, 1, 0, 0, 1, 0];
        for spec in [
            EncoderSpec::CatBoost,
            EncoderSpec::CvMT { folds: 2 },
            EncoderSpec::BlowUpGlmm { folds: 2 },
        ] {
            let r1 = FittedEncoder::fit(&spec, &a, Some(&y), 11).unwrap();
            let r2 = FittedEncoder::fit(&spec, &a, Some(&y), 11).unwrap();
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn too_few_rows_for_folds() {
        assert!(FittedEncoder::fit(
            &EncoderSpec::CvMT { folds: 5 },
            &vals(&["a", "b"]),
            Some(&[0, 1]),
            0
        )
        .is_err());
    }
}
