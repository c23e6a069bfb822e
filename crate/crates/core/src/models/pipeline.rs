use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::learner::{predict_score, train};
use super::metrics::compute_metric;
use super::search::{grid_search, interval_search, SearchSpace};
use super::spec::{MetricKind, ModelFamily, ModelSpec, Tuning, TuningSpec};
use super::ModelError;
use crate::encoders::{DatasetEncoder, EncoderSpec};
use crate::matrix::Matrix;
use crate::tabular::{impute, scale, stratified_folds, Dataset};
use crate::util::{derive_seed, mean};

/// Why an evaluation has no value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    Timeout,
    UndefinedMetric,
    Error(String),
}

impl Reason {
    pub fn label(&self) -> String {
        match self {
            Reason::Timeout => "timeout".into(),
            Reason::UndefinedMetric => "undefined_metric".into(),
            Reason::Error(msg) => format!("error: {msg}"),
        }
    }
}

/// One cross-validated quality, or a missing value with its reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub dataset: String,
    pub encoder: String,
    pub model: ModelFamily,
    pub metric: MetricKind,
    pub tuning: Tuning,
    pub seed: u64,
    pub value: Option<f64>,
    pub reason: Option<String>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub outer_folds: usize,
    /// Checked cooperatively at fold and candidate boundaries.
    pub timeout: Option<Duration>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            outer_folds: 5,
            timeout: None,
        }
    }
}

struct Deadline(Option<Instant>);

impl Deadline {
    fn check(&self) -> Result<(), Reason> {
        match self.0 {
            Some(d) if Instant::now() >= d => Err(Reason::Timeout),
            _ => Ok(()),
        }
    }
}

fn err(e: impl std::fmt::Display) -> Reason {
    Reason::Error(e.to_string())
}

fn model_err(e: ModelError) -> Reason {
    match e {
        ModelError::UndefinedMetric(_) => Reason::UndefinedMetric,
        other => err(other),
    }
}

/// Impute, scale and encode with statistics from `train` only.
fn prepare(
    train_rows: &Dataset,
    test_rows: &Dataset,
    encoder: &EncoderSpec,
    seed: u64,
) -> Result<(Matrix, Matrix), Reason> {
    let train_i = impute(train_rows, train_rows).map_err(err)?;
    let test_i = impute(train_rows, test_rows).map_err(err)?;
    let train_s = scale(&train_i, &train_i);
    let test_s = scale(&train_i, &test_i);
    let (enc, xtr) = DatasetEncoder::fit_transform(&train_s, encoder, seed).map_err(err)?;
    let xte = enc.transform(&test_s).map_err(err)?;
    Ok((xtr, xte))
}

fn fit_and_score(
    model: &ModelSpec,
    xtr: &Matrix,
    ytr: &[u8],
    xte: &Matrix,
    yte: &[u8],
    metric: MetricKind,
) -> Result<f64, Reason> {
    let fitted = train(model, xtr, ytr).map_err(model_err)?;
    let scores = predict_score(&fitted, xte).map_err(model_err)?;
    compute_metric(metric, yte, &scores).map_err(model_err)
}

struct Context<'a> {
    encoder: &'a EncoderSpec,
    model: ModelFamily,
    metric: MetricKind,
    tuning: &'a TuningSpec,
    deadline: Deadline,
}

impl Context<'_> {
    /// Tuning on an already encoded training portion.
    fn tune_model(&self, xtr: &Matrix, ytr: &[u8], seed: u64) -> Result<ModelSpec, Reason> {
        let folds = stratified_folds(ytr, self.tuning.inner_folds, seed).map_err(err)?;
        let mut timed_out = false;
        let best = grid_search(&SearchSpace::grid(self.model), |cand| {
            if self.deadline.check().is_err() {
                timed_out = true;
                return None;
            }
            let mut values = Vec::with_capacity(folds.k);
            for f in 0..folds.k {
                let (tr, te) = (folds.train_indices(f), folds.test_indices(f));
                let ytr_f: Vec<u8> = tr.iter().map(|&i| ytr[i]).collect();
                let yte_f: Vec<u8> = te.iter().map(|&i| ytr[i]).collect();
                values.push(
                    fit_and_score(
                        cand,
                        &xtr.select_rows(&tr),
                        &ytr_f,
                        &xtr.select_rows(&te),
                        &yte_f,
                        self.metric,
                    )
                    .ok()?,
                );
            }
            Some(mean(&values))
        });
        if timed_out {
            return Err(Reason::Timeout);
        }
        best.map(|b| b.0)
            .ok_or_else(|| err("no tuning candidate could be evaluated"))
    }

    /// Tuning with the whole preprocessing and encoding re-run per inner fold.
    fn tune_full(
        &self,
        train_rows: &Dataset,
        seed: u64,
        encoder_seed: u64,
    ) -> Result<ModelSpec, Reason> {
        let folds =
            stratified_folds(train_rows.target(), self.tuning.inner_folds, seed).map_err(err)?;
        let mut prepared = Vec::with_capacity(folds.k);
        for f in 0..folds.k {
            self.deadline.check()?;
            let inner_train = train_rows.select_rows(&folds.train_indices(f));
            let inner_test = train_rows.select_rows(&folds.test_indices(f));
            let (xtr, xte) = prepare(
                &inner_train,
                &inner_test,
                self.encoder,
                derive_seed(encoder_seed, f as u64 + 1),
            )?;
            prepared.push((
                xtr,
                inner_train.target().to_vec(),
                xte,
                inner_test.target().to_vec(),
            ));
        }
        let mut timed_out = false;
        let best = interval_search(
            self.model,
            self.tuning.budget,
            derive_seed(seed, 1),
            |cand| {
                if self.deadline.check().is_err() {
                    timed_out = true;
                    return None;
                }
                let values: Option<Vec<f64>> = prepared
                    .iter()
                    .map(|(xtr, ytr, xte, yte)| {
                        fit_and_score(cand, xtr, ytr, xte, yte, self.metric).ok()
                    })
                    .collect();
                Some(mean(&values?))
            },
        );
        if timed_out {
            return Err(Reason::Timeout);
        }
        best.map(|b| b.0)
            .ok_or_else(|| err("no tuning candidate could be evaluated"))
    }

    fn run(&self, dataset: &Dataset, seed: u64, outer_folds: usize) -> Result<f64, Reason> {
        self.deadline.check()?;
        let folds =
            stratified_folds(dataset.target(), outer_folds, derive_seed(seed, 0)).map_err(err)?;
        let mut values = Vec::with_capacity(folds.k);
        for f in 0..folds.k {
            self.deadline.check()?;
            let train_rows = dataset.select_rows(&folds.train_indices(f));
            let test_rows = dataset.select_rows(&folds.test_indices(f));
            let encoder_seed = derive_seed(seed, 1000 + f as u64);
            let tuning_seed = derive_seed(seed, 2000 + f as u64);
            let (xtr, xte) = prepare(&train_rows, &test_rows, self.encoder, encoder_seed)?;
            let ytr = train_rows.target();
            let model = match self.tuning.strategy {
                Tuning::NoTuning => self.model.default_spec(),
                Tuning::ModelTuning => self.tune_model(&xtr, ytr, tuning_seed)?,
                Tuning::FullTuning => self.tune_full(&train_rows, tuning_seed, encoder_seed)?,
            };
            values.push(fit_and_score(
                &model,
                &xtr,
                ytr,
                &xte,
                test_rows.target(),
                self.metric,
            )?);
        }
        Ok(mean(&values))
    }
}

/// Outer stratified cross-validation of one (encoder, model, metric, tuning)
/// combination. Failures never escape; they become missing values with a reason.
pub fn evaluate_pipeline(
    dataset: &Dataset,
    encoder: &EncoderSpec,
    model: ModelFamily,
    metric: MetricKind,
    tuning: &TuningSpec,
    seed: u64,
    options: &PipelineOptions,
) -> EvaluationRecord {
    let start = Instant::now();
    let ctx = Context {
        encoder,
        model,
        metric,
        tuning,
        deadline: Deadline(options.timeout.map(|t| start + t)),
    };
    let outcome = ctx.run(dataset, seed, options.outer_folds);
    let (value, reason) = match outcome {
        Ok(v) => (Some(v), None),
        Err(r) => (None, Some(r.label())),
    };
    EvaluationRecord {
        dataset: dataset.name().to_string(),
        encoder: encoder.to_string(),
        model,
        metric,
        tuning: tuning.strategy,
        seed,
        value,
        reason,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}
