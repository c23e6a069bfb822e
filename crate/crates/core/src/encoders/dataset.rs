use super::fitted::FittedEncoder;
use super::spec::EncoderSpec;
use super::{EncoderError, Result};
use crate::matrix::Matrix;
use crate::tabular::{Column, ColumnData, Dataset};
use crate::util::derive_seed;

#[derive(Debug, Clone, PartialEq)]
enum ColumnEncoder {
    Passthrough,
    Categorical(FittedEncoder),
}

/// One encoder applied to every categorical column of a dataset; numerical
/// columns pass through unchanged. Output columns follow the input column order.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEncoder {
    spec: EncoderSpec,
    columns: Vec<(String, ColumnEncoder)>,
}

fn levels_of(column: &Column) -> Vec<Option<&str>> {
    (0..column.len()).map(|i| column.level_at(i)).collect()
}

fn numeric_block(column: &Column) -> Result<Matrix> {
    match &column.data {
        ColumnData::Numerical(v) => {
            let data = v
                .iter()
                .map(|x| x.ok_or_else(|| EncoderError::MissingValue(column.name.clone())))
                .collect::<Result<Vec<f64>>>()?;
            Ok(Matrix::from_rows(data.len(), 1, data))
        }
        ColumnData::Categorical { .. } => unreachable!("numeric_block on a categorical column"),
    }
}

impl DatasetEncoder {
    /// Fits on `train` and returns the training feature matrix. The target is
    /// taken from `train` for supervised specs.
    pub fn fit_transform(train: &Dataset, spec: &EncoderSpec, seed: u64) -> Result<(Self, Matrix)> {
        let target = spec.is_supervised().then(|| train.target());
        let mut columns = Vec::with_capacity(train.columns().len());
        let mut blocks = Vec::with_capacity(train.columns().len());
        for (j, column) in train.columns().iter().enumerate() {
            match column.data {
                ColumnData::Numerical(_) => {
                    blocks.push(numeric_block(column)?);
                    columns.push((column.name.clone(), ColumnEncoder::Passthrough));
                }
                ColumnData::Categorical { .. } => {
                    let (fitted, m) = FittedEncoder::fit(
                        spec,
                        &levels_of(column),
                        target,
                        derive_seed(seed, j as u64),
                    )?;
                    blocks.push(m);
                    columns.push((column.name.clone(), ColumnEncoder::Categorical(fitted)));
                }
            }
        }
        let features = Matrix::hstack(&blocks, train.n_rows());
        Ok((
            DatasetEncoder {
                spec: spec.clone(),
                columns,
            },
            features,
        ))
    }

    pub fn spec(&self) -> &EncoderSpec {
        &self.spec
    }

    /// Encodes rows of a dataset with the same column layout as the training data.
    pub fn transform(&self, data: &Dataset) -> Result<Matrix> {
        if data.columns().len() != self.columns.len() {
            return Err(EncoderError::InvalidParameter(format!(
                "expected {} columns, got {}",
                self.columns.len(),
                data.columns().len()
            )));
        }
        let mut blocks = Vec::with_capacity(self.columns.len());
        for ((name, enc), column) in self.columns.iter().zip(data.columns()) {
            if *name != column.name
                || matches!(enc, ColumnEncoder::Passthrough)
                    != matches!(column.data, ColumnData::Numerical(_))
            {
                return Err(EncoderError::InvalidParameter(format!(
                    "column `{}` does not match training layout",
                    column.name
                )));
            }
            blocks.push(match enc {
                ColumnEncoder::Passthrough => numeric_block(column)?,
                ColumnEncoder::Categorical(f) => f.transform(&levels_of(column)),
            });
        }
        Ok(Matrix::hstack(&blocks, data.n_rows()))
    }

    /// Output column names: numerical columns keep their name, encoded blocks
    /// get `name[j]`.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for (name, enc) in &self.columns {
            match enc {
                ColumnEncoder::Passthrough => names.push(name.clone()),
                ColumnEncoder::Categorical(f) => {
                    names.extend((0..f.width()).map(|j| format!("{name}[{j}]")))
                }
            }
        }
        names
    }

    pub fn width(&self) -> usize {
        self.columns
            .iter()
            .map(|(_, e)| match e {
                ColumnEncoder::Passthrough => 1,
                ColumnEncoder::Categorical(f) => f.width(),
            })
            .sum()
    }
}

/// Fits `spec` on `train` and encodes `apply_to` with it.
pub fn encode_dataset(
    train: &Dataset,
    apply_to: &Dataset,
    spec: &EncoderSpec,
    seed: u64,
) -> Result<Matrix> {
    DatasetEncoder::fit_transform(train, spec, seed)?
        .0
        .transform(apply_to)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Dataset {
        Dataset::new(
            "toy",
            vec![
                Column::numerical("x", vec![Some(0.5), Some(-1.0), Some(2.0), Some(0.0)]),
                Column::categorical("c", &[Some("a"), Some("b"), Some("c"), Some("a")]),
            ],
            vec![1, 0, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn numerical_only_is_unchanged() {
        let d = Dataset::new(
            "n",
            vec![Column::numerical("x", vec![Some(1.0), Some(2.0)])],
            vec![0, 1],
        )
        .unwrap();
        let (_, m) = DatasetEncoder::fit_transform(&d, &EncoderSpec::OneHot, 0).unwrap();
        assert_eq!(m, Matrix::from_rows(2, 1, vec![1.0, 2.0]));
    }

    #[test]
    fn onehot_adds_kappa_minus_one_columns() {
        let (enc, m) = DatasetEncoder::fit_transform(&toy(), &EncoderSpec::OneHot, 0).unwrap();
        assert_eq!(m.cols(), 2 + 2);
        assert_eq!(enc.feature_names(), ["x", "c[0]", "c[1]", "c[2]"]);
        assert_eq!(m.row(1), &[-1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn drop_on_all_categorical_is_constant() {
        let d = Dataset::new(
            "c",
            vec![Column::categorical("c", &[Some("a"), Some("b")])],
            vec![0, 1],
        )
        .unwrap();
        let (_, m) = DatasetEncoder::fit_transform(&d, &EncoderSpec::Drop, 0).unwrap();
        assert_eq!(m, Matrix::from_rows(2, 1, vec![1.0, 1.0]));
    }

    #[test]
    fn missing_numeric_is_an_error() {
        let d = Dataset::new(
            "n",
            vec![Column::numerical("x", vec![Some(1.0), None])],
            vec![0, 1],
        )
        .unwrap();
        assert!(matches!(
            DatasetEncoder::fit_transform(&d, &EncoderSpec::Drop, 0),
            Err(EncoderError::MissingValue(_))
        ));
    }

    #[test]
    fn transform_matches_train_path_for_plain_encoders() {
        let d = toy();
        let (enc, m) = DatasetEncoder::fit_transform(&d, &EncoderSpec::MeanTarget, 0).unwrap();
        assert_eq!(enc.transform(&d).unwrap(), m);
        assert_eq!(
            encode_dataset(&d, &d, &EncoderSpec::MeanTarget, 0).unwrap(),
            m
        );
    }
}
