use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::minhash::{DEFAULT_GRAM, DEFAULT_MINHASH_COMPONENTS};
use super::{EncoderError, Result};

/// Encoder family without hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    OneHot,
    Dummy,
    Ordinal,
    Binary,
    Count,
    Frequency,
    Sum,
    BackwardDifference,
    Helmert,
    MinHash,
    MeanTarget,
    WoE,
    PreBinnedMT,
    DiscretizedMT,
    MeanEstimate,
    GLMM,
    CatBoost,
    CVMT,
    CVGLMM,
    BUMT,
    BUGLMM,
    Drop,
}

/// An encoder family together with its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum EncoderSpec {
    OneHot,
    Dummy,
    Ordinal,
    Binary,
    Count,
    Frequency,
    Sum,
    BackwardDifference,
    Helmert,
    MinHash { components: usize, gram: usize },
    MeanTarget,
    WoE,
    PreBinnedMT { threshold: f64 },
    DiscretizedMT { bins: usize },
    MeanEstimate { weight: f64 },
    Glmm,
    CatBoost,
    CvMT { folds: usize },
    CvGlmm { folds: usize },
    BlowUpMT { folds: usize },
    BlowUpGlmm { folds: usize },
    Drop,
}

impl EncoderSpec {
    pub fn family(&self) -> Family {
        match self {
            Self::OneHot => Family::OneHot,
            Self::Dummy => Family::Dummy,
            Self::Ordinal => Family::Ordinal,
            Self::Binary => Family::Binary,
            Self::Count => Family::Count,
            Self::Frequency => Family::Frequency,
            Self::Sum => Family::Sum,
            Self::BackwardDifference => Family::BackwardDifference,
            Self::Helmert => Family::Helmert,
            Self::MinHash { .. } => Family::MinHash,
            Self::MeanTarget => Family::MeanTarget,
            Self::WoE => Family::WoE,
            Self::PreBinnedMT { .. } => Family::PreBinnedMT,
            Self::DiscretizedMT { .. } => Family::DiscretizedMT,
            Self::MeanEstimate { .. } => Family::MeanEstimate,
            Self::Glmm => Family::GLMM,
            Self::CatBoost => Family::CatBoost,
            Self::CvMT { .. } => Family::CVMT,
            Self::CvGlmm { .. } => Family::CVGLMM,
            Self::BlowUpMT { .. } => Family::BUMT,
            Self::BlowUpGlmm { .. } => Family::BUGLMM,
            Self::Drop => Family::Drop,
        }
    }

    /// Whether the encoder consumes the target column.
    pub fn is_supervised(&self) -> bool {
        matches!(
            self.family(),
            Family::MeanTarget
                | Family::WoE
                | Family::PreBinnedMT
                | Family::DiscretizedMT
                | Family::MeanEstimate
                | Family::GLMM
                | Family::CatBoost
                | Family::CVMT
                | Family::CVGLMM
                | Family::BUMT
                | Family::BUGLMM
        )
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match *self {
            Self::MinHash { components, gram } => {
                p.insert("components".into(), components as f64);
                p.insert("gram".into(), gram as f64);
            }
            Self::PreBinnedMT { threshold } => {
                p.insert("threshold".into(), threshold);
            }
            Self::DiscretizedMT { bins } => {
                p.insert("bins".into(), bins as f64);
            }
            Self::MeanEstimate { weight } => {
                p.insert("weight".into(), weight);
            }
            Self::CvMT { folds }
            | Self::CvGlmm { folds }
            | Self::BlowUpMT { folds }
            | Self::BlowUpGlmm { folds } => {
                p.insert("folds".into(), folds as f64);
            }
            _ => {}
        }
        p
    }

    pub fn from_parts(family: Family, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match family {
            Family::MinHash => &["components", "gram"],
            Family::PreBinnedMT => &["threshold"],
            Family::DiscretizedMT => &["bins"],
            Family::MeanEstimate => &["weight"],
            Family::CVMT | Family::CVGLMM | Family::BUMT | Family::BUGLMM => &["folds"],
            _ => &[],
        };
        if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(EncoderError::InvalidParameter(format!(
                "{family:?} does not take `{extra}`"
            )));
        }
        let count = |name: &str, default: Option<usize>| -> Result<usize> {
            match params.get(name) {
                Some(&v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
                Some(&v) => Err(EncoderError::InvalidParameter(format!(
                    "`{name}` must be a whole number, got {v}"
                ))),
                None => default.ok_or_else(|| {
                    EncoderError::InvalidParameter(format!("{family:?} requires `{name}`"))
                }),
            }
        };
        let real = |name: &str| -> Result<f64> {
            params.get(name).copied().ok_or_else(|| {
                EncoderError::InvalidParameter(format!("{family:?} requires `{name}`"))
            })
        };
        let spec = match family {
            Family::OneHot => Self::OneHot,
            Family::Dummy => Self::Dummy,
            Family::Ordinal => Self::Ordinal,
            Family::Binary => Self::Binary,
            Family::Count => Self::Count,
            Family::Frequency => Self::Frequency,
            Family::Sum => Self::Sum,
            Family::BackwardDifference => Self::BackwardDifference,
            Family::Helmert => Self::Helmert,
            Family::MinHash => Self::MinHash {
                components: count("components", Some(DEFAULT_MINHASH_COMPONENTS))?,
                gram: count("gram", Some(DEFAULT_GRAM))?,
            },
            Family::MeanTarget => Self::MeanTarget,
            Family::WoE => Self::WoE,
            Family::PreBinnedMT => Self::PreBinnedMT {
                threshold: real("threshold")?,
            },
            Family::DiscretizedMT => Self::DiscretizedMT {
                bins: count("bins", None)?,
            },
            Family::MeanEstimate => Self::MeanEstimate {
                weight: real("weight")?,
            },
            Family::GLMM => Self::Glmm,
            Family::CatBoost => Self::CatBoost,
            Family::CVMT => Self::CvMT {
                folds: count("folds", None)?,
            },
            Family::CVGLMM => Self::CvGlmm {
                folds: count("folds", None)?,
            },
            Family::BUMT => Self::BlowUpMT {
                folds: count("folds", None)?,
            },
            Family::BUGLMM => Self::BlowUpGlmm {
                folds: count("folds", None)?,
            },
            Family::Drop => Self::Drop,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(EncoderError::InvalidParameter(m));
        match *self {
            Self::MinHash { components, gram } if components == 0 || gram == 0 => {
                bad("MinHash needs components >= 1 and gram >= 1".into())
            }
            Self::PreBinnedMT { threshold } if !(threshold >= 0.0 && threshold.is_finite()) => {
                bad(format!("PBMT threshold must be >= 0, got {threshold}"))
            }
            Self::DiscretizedMT { bins: 0 } => bad("DMT needs at least one bin".into()),
            Self::MeanEstimate { weight } if !(weight >= 0.0 && weight.is_finite()) => {
                bad(format!("ME weight must be >= 0, got {weight}"))
            }
            Self::CvMT { folds }
            | Self::CvGlmm { folds }
            | Self::BlowUpMT { folds }
            | Self::BlowUpGlmm { folds }
                if folds < 2 =>
            {
                bad(format!("fold-based encoders need k >= 2, got {folds}"))
            }
            _ => Ok(()),
        }
    }

    /// Every encoder of the benchmark grid, hyperparameters included.
    pub fn full_grid() -> Vec<EncoderSpec> {
        let mut v = vec![
            Self::Binary,
            Self::CatBoost,
            Self::Count,
            Self::Drop,
            Self::Glmm,
            Self::MinHash {
                components: DEFAULT_MINHASH_COMPONENTS,
                gram: DEFAULT_GRAM,
            },
            Self::MeanTarget,
            Self::OneHot,
            Self::Ordinal,
            Self::Sum,
            Self::WoE,
        ];
        for bins in [2, 5, 10] {
            v.push(Self::DiscretizedMT { bins });
        }
        for weight in [0.1, 1.0, 10.0] {
            v.push(Self::MeanEstimate { weight });
        }
        for threshold in [0.001, 0.01, 0.1] {
            v.push(Self::PreBinnedMT { threshold });
        }
        for folds in [2, 5, 10] {
            v.push(Self::CvMT { folds });
            v.push(Self::CvGlmm { folds });
            v.push(Self::BlowUpMT { folds });
            v.push(Self::BlowUpGlmm { folds });
        }
        v
    }
}

impl fmt::Display for EncoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::OneHot => write!(f, "OH"),
            Self::Dummy => write!(f, "Dummy"),
            Self::Ordinal => write!(f, "Ord"),
            Self::Binary => write!(f, "Bin"),
            Self::Count => write!(f, "Count"),
            Self::Frequency => write!(f, "Freq"),
            Self::Sum => write!(f, "Sum"),
            Self::BackwardDifference => write!(f, "BackDiff"),
            Self::Helmert => write!(f, "Helmert"),
            Self::MinHash { components, gram } if gram == DEFAULT_GRAM => {
                if components == DEFAULT_MINHASH_COMPONENTS {
                    write!(f, "MH")
                } else {
                    write!(f, "MH{components}")
                }
            }
            Self::MinHash { components, gram } => write!(f, "MH{components}n{gram}"),
            Self::MeanTarget => write!(f, "MT"),
            Self::WoE => write!(f, "WoE"),
            Self::PreBinnedMT { threshold } => write!(f, "PBMT{threshold}"),
            Self::DiscretizedMT { bins } => write!(f, "DMT{bins}"),
            Self::MeanEstimate { weight } => write!(f, "ME{weight}"),
            Self::Glmm => write!(f, "GLMM"),
            Self::CatBoost => write!(f, "CB"),
            Self::CvMT { folds } => write!(f, "CV{folds}MT"),
            Self::CvGlmm { folds } => write!(f, "CV{folds}GLMM"),
            Self::BlowUpMT { folds } => write!(f, "BU{folds}MT"),
            Self::BlowUpGlmm { folds } => write!(f, "BU{folds}GLMM"),
            Self::Drop => write!(f, "Drop"),
        }
    }
}

impl FromStr for EncoderSpec {
    type Err = EncoderError;

    /// Parses display names such as `OH`, `CV5GLMM`, `ME10` or `PBMT0.01`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || EncoderError::UnknownEncoder(s.to_string());
        let fixed = match s {
            "OH" | "OneHot" => Some(Self::OneHot),
            "Dummy" => Some(Self::Dummy),
            "Ord" | "Ordinal" => Some(Self::Ordinal),
            "Bin" | "Binary" => Some(Self::Binary),
            "Count" => Some(Self::Count),
            "Freq" | "Frequency" => Some(Self::Frequency),
            "Sum" => Some(Self::Sum),
            "BackDiff" | "BackwardDifference" => Some(Self::BackwardDifference),
            "Helmert" => Some(Self::Helmert),
            "MH" | "MinHash" => Some(Self::MinHash {
                components: DEFAULT_MINHASH_COMPONENTS,
                gram: DEFAULT_GRAM,
            }),
            "MT" => Some(Self::MeanTarget),
            "WoE" => Some(Self::WoE),
            "GLMM" => Some(Self::Glmm),
            "CB" | "CatBoost" => Some(Self::CatBoost),
            "Drop" => Some(Self::Drop),
            _ => None,
        };
        if let Some(spec) = fixed {
            return Ok(spec);
        }
        let int = |t: &str| t.parse::<usize>().map_err(|_| unknown());
        let real = |t: &str| t.parse::<f64>().map_err(|_| unknown());
        let spec = if let Some(rest) = s.strip_prefix("PBMT") {
            Self::PreBinnedMT {
                threshold: real(rest)?,
            }
        } else if let Some(rest) = s.strip_prefix("DMT") {
            Self::DiscretizedMT { bins: int(rest)? }
        } else if let Some(rest) = s.strip_prefix("ME") {
            Self::MeanEstimate {
                weight: real(rest)?,
            }
        } else if let Some(rest) = s.strip_prefix("MH") {
            match rest.split_once('n') {
                Some((d, n)) => Self::MinHash {
                    components: int(d)?,
                    gram: int(n)?,
                },
                None => Self::MinHash {
                    components: int(rest)?,
                    gram: DEFAULT_GRAM,
                },
            }
        } else if let Some(rest) = s.strip_prefix("CV").or_else(|| s.strip_prefix("BU")) {
            let blowup = s.starts_with("BU");
            let (digits, base) = if let Some(d) = rest.strip_suffix("GLMM") {
                (d, true)
            } else if let Some(d) = rest.strip_suffix("MT") {
                (d, false)
            } else {
                return Err(unknown());
            };
            let folds = int(digits)?;
            match (blowup, base) {
                (false, false) => Self::CvMT { folds },
                (false, true) => Self::CvGlmm { folds },
                (true, false) => Self::BlowUpMT { folds },
                (true, true) => Self::BlowUpGlmm { folds },
            }
        } else {
            return Err(unknown());
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: Family,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

impl Serialize for EncoderSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            family: self.family(),
            params: self.params(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EncoderSpec {
    /// Accepts either the `{family, params}` object or a display name string.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Name(String),
            Repr(SpecRepr),
        }
        match Either::deserialize(deserializer)? {
            Either::Name(s) => s.parse().map_err(serde::de::Error::custom),
            Either::Repr(r) => {
                EncoderSpec::from_parts(r.family, &r.params).map_err(serde::de::Error::custom)
            }
        }
    }
}
