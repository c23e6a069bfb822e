use super::knn::Knn;
use super::logreg::LogisticRegression;
use super::spec::ModelSpec;
use super::tree::DecisionTree;
use super::{ModelError, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Tree(DecisionTree),
    Knn(Knn),
    LogReg(LogisticRegression),
}

pub fn train(model: &ModelSpec, x: &Matrix, y: &[u8]) -> Result<FittedModel> {
    if x.rows() != y.len() {
        return Err(ModelError::LengthMismatch(x.rows(), y.len()));
    }
    if y.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if !x.is_finite() {
        return Err(ModelError::NonFinite);
    }
    Ok(match *model {
        ModelSpec::DecisionTree { max_depth } => {
            FittedModel::Tree(DecisionTree::fit(x, y, max_depth))
        }
        ModelSpec::Knn { n_neighbors } => FittedModel::Knn(Knn::fit(x, y, n_neighbors)),
        ModelSpec::LogReg { c } => FittedModel::LogReg(LogisticRegression::fit(x, y, c)?),
    })
}

impl FittedModel {
    pub fn width(&self) -> usize {
        match self {
            FittedModel::Tree(m) => m.width(),
            FittedModel::Knn(m) => m.width(),
            FittedModel::LogReg(m) => m.width(),
        }
    }

    fn score(&self, row: &[f64]) -> f64 {
        match self {
            FittedModel::Tree(m) => m.score(row),
            FittedModel::Knn(m) => m.score(row),
            FittedModel::LogReg(m) => m.score(row),
        }
    }
}

/// Positive-class scores in `[0, 1]`; the hard label is `score >= 0.5`.
pub fn predict_score(fitted: &FittedModel, x: &Matrix) -> Result<Vec<f64>> {
    if x.cols() != fitted.width() {
        return Err(ModelError::WidthMismatch {
            expected: fitted.width(),
            got: x.cols(),
        });
    }
    Ok((0..x.rows()).map(|i| fitted.score(x.row(i))).collect())
}
