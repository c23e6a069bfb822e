use serde::{Deserialize, Serialize};

use super::{AggregationError, Result};

/// Encoders × datasets matrix of qualities; `None` is a missing evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityTable {
    encoders: Vec<String>,
    datasets: Vec<String>,
    /// `values[i][j]`: encoder `i` on dataset `j`.
    values: Vec<Vec<Option<f64>>>,
}

impl QualityTable {
    /// Non-finite values are treated as missing.
    pub fn new(
        encoders: Vec<String>,
        datasets: Vec<String>,
        values: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if values.len() != encoders.len() || values.iter().any(|r| r.len() != datasets.len()) {
            return Err(AggregationError::Shape(format!(
                "expected {} rows of {} values",
                encoders.len(),
                datasets.len()
            )));
        }
        let values = values
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.filter(|x| x.is_finite())).collect())
            .collect();
        Ok(QualityTable {
            encoders,
            datasets,
            values,
        })
    }

    pub fn encoders(&self) -> &[String] {
        &self.encoders
    }

    pub fn datasets(&self) -> &[String] {
        &self.datasets
    }

    pub fn n_encoders(&self) -> usize {
        self.encoders.len()
    }

    pub fn n_datasets(&self) -> usize {
        self.datasets.len()
    }

    pub fn get(&self, encoder: usize, dataset: usize) -> Option<f64> {
        self.values[encoder][dataset]
    }

    pub fn row(&self, encoder: usize) -> &[Option<f64>] {
        &self.values[encoder]
    }

    pub fn column(&self, dataset: usize) -> Vec<Option<f64>> {
        self.values.iter().map(|r| r[dataset]).collect()
    }

    /// Best quality on a dataset among non-missing entries.
    pub fn max(&self, dataset: usize) -> Option<f64> {
        self.column(dataset).into_iter().flatten().reduce(f64::max)
    }

    pub fn min(&self, dataset: usize) -> Option<f64> {
        self.column(dataset).into_iter().flatten().reduce(f64::min)
    }

    /// Table restricted to a subset of datasets, in the given order.
    pub fn select_datasets(&self, idx: &[usize]) -> QualityTable {
        QualityTable {
            encoders: self.encoders.clone(),
            datasets: idx.iter().map(|&j| self.datasets[j].clone()).collect(),
            values: self
                .values
                .iter()
                .map(|r| idx.iter().map(|&j| r[j]).collect())
                .collect(),
        }
    }
}
