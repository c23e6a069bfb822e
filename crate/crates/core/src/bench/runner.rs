use std::time::Duration;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::store::{EvaluationStore, RecordKey};
use super::{BenchError, Result};
use crate::encoders::EncoderSpec;
use crate::models::{
    evaluate_pipeline, MetricKind, ModelFamily, PipelineOptions, Tuning, TuningSpec,
};
use crate::tabular::{load_csv, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunSummary {
    pub planned: usize,
    /// Cells already in the store before this run.
    pub skipped: usize,
    pub executed: usize,
    /// Executed cells that ended without a value.
    pub missing: usize,
}

pub fn load_datasets(config: &ExperimentConfig) -> Result<Vec<Dataset>> {
    let datasets: Vec<Dataset> = config
        .datasets
        .iter()
        .map(|d| load_csv(&d.path, &d.target, &d.hints()))
        .collect::<std::result::Result<_, _>>()?;
    for (i, d) in datasets.iter().enumerate() {
        if datasets[..i].iter().any(|o| o.name() == d.name()) {
            return Err(BenchError::Config(format!(
                "two datasets are named `{}`",
                d.name()
            )));
        }
    }
    Ok(datasets)
}

struct Job<'a> {
    dataset: &'a Dataset,
    encoder: &'a EncoderSpec,
    model: ModelFamily,
    metric: MetricKind,
    tuning: Tuning,
}

/// Executes every grid cell missing from the store in `config.output_dir`.
///
/// Cells run on a pool of `config.worker_count()` threads; results are
/// appended by this thread in grid order (dataset, encoder, model, metric,
/// tuning), so the file layout does not depend on scheduling.
pub fn run(
    config: &ExperimentConfig,
    mut progress: impl FnMut(usize, usize),
) -> Result<RunSummary> {
    config.validate()?;
    let datasets = load_datasets(config)?;
    let mut store = EvaluationStore::open(&config.output_dir)?;
    let mut summary = RunSummary {
        planned: config.grid_size(),
        ..Default::default()
    };

    let mut jobs = Vec::new();
    for dataset in &datasets {
        for encoder in &config.encoders {
            for &model in &config.models {
                for &metric in &config.metrics {
                    for &tuning in &config.tuning {
                        let key = RecordKey {
                            dataset: dataset.name().to_string(),
                            encoder: encoder.to_string(),
                            model,
                            metric,
                            tuning,
                            seed: config.seed,
                        };
                        if store.contains(&key) {
                            summary.skipped += 1;
                        } else {
                            jobs.push(Job {
                                dataset,
                                encoder,
                                model,
                                metric,
                                tuning,
                            });
                        }
                    }
                }
            }
        }
    }

    let workers = config.worker_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start {workers} workers: {e}")))?;
    let options = PipelineOptions {
        outer_folds: config.outer_folds,
        timeout: Some(Duration::from_secs_f64(config.timeout_s)),
    };
    let total = jobs.len();
    for chunk in jobs.chunks(workers * 2) {
        let records: Vec<_> = pool.install(|| {
            chunk
                .par_iter()
                .map(|j| {
                    let tuning = TuningSpec {
                        strategy: j.tuning,
                        inner_folds: config.inner_folds,
                        budget: config.budget,
                    };
                    evaluate_pipeline(
                        j.dataset,
                        j.encoder,
                        j.model,
                        j.metric,
                        &tuning,
                        config.seed,
                        &options,
                    )
                })
                .collect()
        });
        for r in records {
            summary.executed += 1;
            summary.missing += usize::from(r.value.is_none());
            store.append(r)?;
        }
        progress(summary.executed, total);
    }
    Ok(summary)
}
