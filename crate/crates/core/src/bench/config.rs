use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{io_err, BenchError, Result};
use crate::encoders::EncoderSpec;
use crate::models::{MetricKind, ModelFamily, Tuning};
use crate::tabular::{ColumnKind, KindHints};

/// Overrides the worker count from the config file.
pub const WORKERS_ENV: &str = "CATBENCH_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSource {
    pub path: PathBuf,
    #[serde(default = "default_target")]
    pub target: String,
    /// Columns to read as categorical even if every cell parses as a number.
    #[serde(default)]
    pub categorical: Vec<String>,
}

fn default_target() -> String {
    "target".into()
}

impl DatasetSource {
    pub fn hints(&self) -> KindHints {
        self.categorical
            .iter()
            .map(|c| (c.clone(), ColumnKind::Categorical))
            .collect()
    }
}

/// A full factor grid. Encoders accept display names (`"CV5MT"`) or
/// `{family, params}` objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetSource>,
    pub encoders: Vec<EncoderSpec>,
    pub models: Vec<ModelFamily>,
    pub metrics: Vec<MetricKind>,
    pub tuning: Vec<Tuning>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
    /// Worker threads; `None` uses all cores unless the env var says otherwise.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_outer")]
    pub outer_folds: usize,
    #[serde(default = "default_inner")]
    pub inner_folds: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_timeout() -> f64 {
    60.0
}
fn default_output() -> PathBuf {
    PathBuf::from("catbench-out")
}
fn default_outer() -> usize {
    5
}
fn default_inner() -> usize {
    3
}
fn default_budget() -> usize {
    25
}

impl ExperimentConfig {
    /// Parses a JSON config. Relative dataset and output paths are resolved
    /// against `base`.
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        for d in &mut cfg.datasets {
            if d.path.is_relative() {
                d.path = base.join(&d.path);
            }
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        let empty = [
            ("datasets", self.datasets.is_empty()),
            ("encoders", self.encoders.is_empty()),
            ("models", self.models.is_empty()),
            ("metrics", self.metrics.is_empty()),
            ("tuning", self.tuning.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(BenchError::Config(format!("`{name}` must not be empty")));
        }
        if !(self.timeout_s > 0.0 && self.timeout_s.is_finite()) {
            return Err(BenchError::Config(format!(
                "timeout_s must be positive, got {}",
                self.timeout_s
            )));
        }
        if self.outer_folds < 2 || self.inner_folds < 2 || self.budget == 0 {
            return Err(BenchError::Config(
                "need at least 2 outer and inner folds and a positive budget".into(),
            ));
        }
        if self.workers == Some(0) {
            return Err(BenchError::Config("workers must be positive".into()));
        }
        for e in &self.encoders {
            e.validate()
                .map_err(|err| BenchError::Config(err.to_string()))?;
        }
        Ok(())
    }

    /// Worker count: the env var wins, then the config, then all cores.
    pub fn worker_count(&self) -> usize {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .or(self.workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn grid_size(&self) -> usize {
        self.datasets.len()
            * self.encoders.len()
            * self.models.len()
            * self.metrics.len()
            * self.tuning.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "datasets": [{"path": "data/a.csv"}],
        "encoders": ["OH", {"family": "CVMT", "params": {"folds": 5}}],
        "models": ["DT", "kNN"],
        "metrics": ["AUC"],
        "tuning": ["NoTuning"]
    }"#;

    #[test]
    fn defaults_and_relative_paths() {
        let cfg = ExperimentConfig::from_json(MINIMAL, Path::new("/base")).unwrap();
        assert_eq!(cfg.datasets[0].path, PathBuf::from("/base/data/a.csv"));
        assert_eq!(cfg.datasets[0].target, "target");
        assert_eq!(cfg.output_dir, PathBuf::from("/base/catbench-out"));
        assert_eq!(cfg.encoders[1], EncoderSpec::CvMT { folds: 5 });
        assert_eq!(
            (cfg.timeout_s, cfg.outer_folds, cfg.grid_size()),
            (60.0, 5, 4)
        );
    }

    #[test]
    fn rejects_empty_lists_and_bad_timeout() {
        let no_models = MINIMAL.replace(r#"["DT", "kNN"]"#, "[]");
        assert!(
            matches!(ExperimentConfig::from_json(&no_models, Path::new(".")), Err(BenchError::Config(m)) if m.contains("models"))
        );
        let zero = MINIMAL.replace(r#""tuning""#, r#""timeout_s": 0, "tuning""#);
        assert!(ExperimentConfig::from_json(&zero, Path::new(".")).is_err());
    }
}
