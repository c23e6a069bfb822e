use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AnalysisError, Result};
use crate::models::{EvaluationRecord, Tuning};
use crate::util::{mean, quantile_sorted};

/// Quality difference between two tuning strategies on one shared cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningDelta {
    pub dataset: String,
    pub encoder: String,
    pub model: String,
    pub metric: String,
    pub delta: f64,
}

/// Five-number summary plus mean of a group of deltas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainSummary {
    pub factor: String,
    pub value: String,
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningGain {
    pub a: Tuning,
    pub b: Tuning,
    pub deltas: Vec<TuningDelta>,
    pub summaries: Vec<GainSummary>,
}

impl TuningGain {
    pub fn deltas_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["dataset", "encoder", "model", "metric", "delta"])
            .unwrap();
        for d in &self.deltas {
            w.write_record([
                &d.dataset,
                &d.encoder,
                &d.model,
                &d.metric,
                &format!("{:.6}", d.delta),
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "factor", "value", "count", "mean", "min", "q1", "median", "q3", "max",
        ])
        .unwrap();
        for s in &self.summaries {
            let mut row = vec![s.factor.clone(), s.value.clone(), s.count.to_string()];
            row.extend([s.mean, s.min, s.q1, s.median, s.q3, s.max].map(|x| format!("{x:.6}")));
            w.write_record(&row).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// Summary for one factor value, e.g. `("model", "DT")`.
    pub fn summary(&self, factor: &str, value: &str) -> Option<&GainSummary> {
        self.summaries
            .iter()
            .find(|s| s.factor == factor && s.value == value)
    }
}

type Key = (String, String, String, String);
type Field = fn(&TuningDelta) -> &String;

fn cell_means(records: &[EvaluationRecord], tuning: Tuning) -> BTreeMap<Key, f64> {
    let mut cells: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.tuning == tuning) {
        if let Some(v) = r.value {
            let key = (
                r.dataset.clone(),
                r.encoder.clone(),
                r.model.to_string(),
                r.metric.to_string(),
            );
            cells.entry(key).or_default().push(v);
        }
    }
    cells.into_iter().map(|(k, v)| (k, mean(&v))).collect()
}

fn summarize(factor: &str, value: String, mut xs: Vec<f64>) -> GainSummary {
    xs.sort_by(f64::total_cmp);
    GainSummary {
        factor: factor.to_string(),
        value,
        count: xs.len(),
        mean: mean(&xs),
        min: xs[0],
        q1: quantile_sorted(&xs, 0.25),
        median: quantile_sorted(&xs, 0.5),
        q3: quantile_sorted(&xs, 0.75),
        max: xs[xs.len() - 1],
    }
}

/// `quality(a) - quality(b)` on every (dataset, encoder, model, metric)
/// evaluated under both strategies, with seeds averaged first. Summaries are
/// grouped by model, metric and encoder.
pub fn tuning_gain(records: &[EvaluationRecord], a: Tuning, b: Tuning) -> Result<TuningGain> {
    let qa = cell_means(records, a);
    let qb = cell_means(records, b);
    let deltas: Vec<TuningDelta> = qa
        .iter()
        .filter_map(|(k, va)| {
            qb.get(k).map(|vb| TuningDelta {
                dataset: k.0.clone(),
                encoder: k.1.clone(),
                model: k.2.clone(),
                metric: k.3.clone(),
                delta: va - vb,
            })
        })
        .collect();
    if deltas.is_empty() {
        return Err(AnalysisError::NoSharedFactors);
    }
    let mut summaries = Vec::new();
    let groups: [(&str, Field); 3] = [
        ("model", |d| &d.model),
        ("metric", |d| &d.metric),
        ("encoder", |d| &d.encoder),
    ];
    for (factor, field) in groups {
        let mut by: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for d in &deltas {
            by.entry(field(d).clone()).or_default().push(d.delta);
        }
        summaries.extend(by.into_iter().map(|(v, xs)| summarize(factor, v, xs)));
    }
    summaries.push(summarize(
        "all",
        "all".into(),
        deltas.iter().map(|d| d.delta).collect(),
    ));
    Ok(TuningGain {
        a,
        b,
        deltas,
        summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{MetricKind, ModelFamily};

    fn rec(
        dataset: &str,
        encoder: &str,
        model: ModelFamily,
        tuning: Tuning,
        value: Option<f64>,
    ) -> EvaluationRecord {
        EvaluationRecord {
            dataset: dataset.into(),
            encoder: encoder.into(),
            model,
            metric: MetricKind::Acc,
            tuning,
            seed: 0,
            value,
            reason: None,
            wall_time_s: 0.0,
        }
    }

    fn store(offset: f64) -> Vec<EvaluationRecord> {
        let mut out = Vec::new();
        for (i, d) in ["d1", "d2"].iter().enumerate() {
            for (j, e) in ["OH", "MT", "Drop"].iter().enumerate() {
                for m in [ModelFamily::DecisionTree, ModelFamily::Knn] {
                    let base = 0.5 + 0.1 * i as f64 + 0.05 * j as f64;
                    out.push(rec(d, e, m, Tuning::NoTuning, Some(base)));
                    out.push(rec(d, e, m, Tuning::ModelTuning, Some(base + offset)));
                }
            }
        }
        out
    }

    #[test]
    fn identical_strategies_give_zero() {
        let g = tuning_gain(&store(0.0), Tuning::ModelTuning, Tuning::NoTuning).unwrap();
        assert_eq!(g.deltas.len(), 12);
        assert!(g.deltas.iter().all(|d| d.delta == 0.0));
    }

    #[test]
    fn uniform_offset_is_recovered() {
        let g = tuning_gain(&store(0.1), Tuning::ModelTuning, Tuning::NoTuning).unwrap();
        assert!(g.deltas.iter().all(|d| (d.delta - 0.1).abs() < 1e-12));
        let dt = g.summary("model", "DT").unwrap();
        assert_eq!(dt.count, 6);
        assert!((dt.median - 0.1).abs() < 1e-12);
        assert!(g.summary("encoder", "Drop").is_some());
        assert!(g.summary_csv().lines().count() == 1 + 2 + 1 + 3 + 1);
    }

    #[test]
    fn missing_cells_are_not_shared() {
        let recs = vec![
            rec("d", "OH", ModelFamily::Knn, Tuning::NoTuning, Some(0.5)),
            rec("d", "OH", ModelFamily::Knn, Tuning::FullTuning, None),
        ];
        assert_eq!(
            tuning_gain(&recs, Tuning::FullTuning, Tuning::NoTuning),
            Err(AnalysisError::NoSharedFactors)
        );
    }
}
