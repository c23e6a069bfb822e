use super::dataset::{Column, ColumnData, Dataset};
use super::{Result, TabularError};
use crate::util::median;

#[derive(Debug, Clone, PartialEq)]
enum Fill {
    Numerical(f64),
    Categorical(u32),
}

/// Median/mode imputation fitted on a training view.
#[derive(Debug, Clone, PartialEq)]
pub struct Imputer {
    fills: Vec<Fill>,
}

impl Imputer {
    pub fn fit(train: &Dataset) -> Result<Self> {
        let fills = train
            .columns()
            .iter()
            .map(|col| match &col.data {
                ColumnData::Numerical(v) => {
                    let present: Vec<f64> = v.iter().flatten().copied().collect();
                    if present.is_empty() {
                        return Err(TabularError::AllMissingColumn(col.name.clone()));
                    }
                    Ok(Fill::Numerical(median(&present)))
                }
                ColumnData::Categorical { codes, .. } => {
                    // first-appearance order decides ties
                    let mut order: Vec<u32> = Vec::new();
                    let mut counts: std::collections::HashMap<u32, usize> = Default::default();
                    for &c in codes.iter().flatten() {
                        let e = counts.entry(c).or_insert(0);
                        if *e == 0 {
                            order.push(c);
                        }
                        *e += 1;
                    }
                    let mut best: Option<(u32, usize)> = None;
                    for c in order {
                        let n = counts[&c];
                        if best.is_none_or(|(_, b)| n > b) {
                            best = Some((c, n));
                        }
                    }
                    best.map(|(c, _)| Fill::Categorical(c))
                        .ok_or_else(|| TabularError::AllMissingColumn(col.name.clone()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { fills })
    }

    pub fn apply(&self, data: &Dataset) -> Dataset {
        let columns = data
            .columns()
            .iter()
            .zip(&self.fills)
            .map(|(col, fill)| {
                let data = match (&col.data, fill) {
                    (ColumnData::Numerical(v), Fill::Numerical(m)) => {
                        ColumnData::Numerical(v.iter().map(|x| Some(x.unwrap_or(*m))).collect())
                    }
                    (ColumnData::Categorical { codes, levels }, Fill::Categorical(m)) => {
                        ColumnData::Categorical {
                            codes: codes.iter().map(|c| Some(c.unwrap_or(*m))).collect(),
                            levels: levels.clone(),
                        }
                    }
                    _ => panic!("imputer applied to a dataset with a different schema"),
                };
                Column {
                    name: col.name.clone(),
                    data,
                }
            })
            .collect();
        data.with_columns(columns)
    }
}

/// Standardization of numerical columns with train mean and population std.
/// Zero-variance columns map to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    params: Vec<Option<(f64, f64)>>,
}

impl Scaler {
    pub fn fit(train: &Dataset) -> Self {
        let params = train
            .columns()
            .iter()
            .map(|col| match &col.data {
                ColumnData::Numerical(v) => {
                    let present: Vec<f64> = v.iter().flatten().copied().collect();
                    if present.is_empty() {
                        return Some((0.0, 0.0));
                    }
                    let n = present.len() as f64;
                    let mean = present.iter().sum::<f64>() / n;
                    let var = present.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
                    Some((mean, var.sqrt()))
                }
                ColumnData::Categorical { .. } => None,
            })
            .collect();
        Self { params }
    }

    pub fn apply(&self, data: &Dataset) -> Dataset {
        let columns = data
            .columns()
            .iter()
            .zip(&self.params)
            .map(|(col, p)| match (&col.data, p) {
                (ColumnData::Numerical(v), Some((mean, std))) => {
                    let scaled = v
                        .iter()
                        .map(|x| x.map(|x| if *std > 1e-12 { (x - mean) / std } else { 0.0 }))
                        .collect();
                    Column::numerical(col.name.clone(), scaled)
                }
                _ => col.clone(),
            })
            .collect();
        data.with_columns(columns)
    }
}

/// Imputes `apply_to` with statistics computed from `train` only.
pub fn impute(train: &Dataset, apply_to: &Dataset) -> Result<Dataset> {
    Ok(Imputer::fit(train)?.apply(apply_to))
}

/// Standardizes `apply_to` with statistics computed from `train` only.
pub fn scale(train: &Dataset, apply_to: &Dataset) -> Dataset {
    Scaler::fit(train).apply(apply_to)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(d: &Dataset, j: usize) -> Vec<Option<f64>> {
        match &d.columns()[j].data {
            ColumnData::Numerical(v) => v.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn median_imputation() {
        let d = Dataset::new(
            "d",
            vec![Column::numerical("x", vec![Some(1.0), Some(3.0), None])],
            vec![0, 1, 0],
        )
        .unwrap();
        let out = impute(&d, &d).unwrap();
        assert_eq!(num(&out, 0), vec![Some(1.0), Some(3.0), Some(2.0)]);
    }

    #[test]
    fn mode_imputation_and_tie_order() {
        let d = Dataset::new(
            "d",
            vec![Column::categorical(
                "c",
                &[Some("a"), Some("a"), Some("b"), None],
            )],
            vec![0, 1, 0, 1],
        )
        .unwrap();
        let train = d.select_rows(&[0, 1, 2]);
        let out = impute(&train, &d).unwrap();
        assert_eq!(out.columns()[0].level_at(3), Some("a"));

        let tie = Dataset::new(
            "d",
            vec![Column::categorical(
                "c",
                &[Some("b"), Some("a"), Some("a"), Some("b")],
            )],
            vec![0; 4],
        )
        .unwrap();
        assert_eq!(
            Imputer::fit(&tie).unwrap().fills,
            vec![Fill::Categorical(0)]
        );
    }

    #[test]
    fn no_missing_is_identity() {
        let d = Dataset::new(
            "d",
            vec![
                Column::numerical("x", vec![Some(1.0), Some(5.0)]),
                Column::categorical("c", &[Some("u"), Some("v")]),
            ],
            vec![0, 1],
        )
        .unwrap();
        assert_eq!(impute(&d, &d).unwrap(), d);
    }

    #[test]
    fn all_missing_is_an_error() {
        let d = Dataset::new(
            "d",
            vec![Column::numerical("x", vec![None, None])],
            vec![0, 1],
        )
        .unwrap();
        assert_eq!(
            impute(&d, &d).unwrap_err(),
            TabularError::AllMissingColumn("x".into())
        );
    }

    #[test]
    fn standardization() {
        let d = Dataset::new(
            "d",
            vec![
                Column::numerical("x", vec![Some(0.0), Some(2.0)]),
                Column::numerical("k", vec![Some(5.0), Some(5.0)]),
                Column::categorical("c", &[Some("u"), Some("v")]),
            ],
            vec![0, 1],
        )
        .unwrap();
        let s = scale(&d, &d);
        assert_eq!(num(&s, 0), vec![Some(-1.0), Some(1.0)]);
        assert_eq!(num(&s, 1), vec![Some(0.0), Some(0.0)]);
        assert_eq!(s.columns()[2], d.columns()[2]);
    }

    #[test]
    fn statistics_ignore_apply_rows() {
        let train = Dataset::new(
            "d",
            vec![Column::numerical("x", vec![Some(1.0), Some(3.0)])],
            vec![0, 1],
        )
        .unwrap();
        let test_a = Dataset::new(
            "d",
            vec![Column::numerical("x", vec![Some(10.0), None])],
            vec![0, 1],
        )
        .unwrap();
        let test_b = test_a.select_rows(&[1, 0]);
        let a = scale(&train, &impute(&train, &test_a).unwrap());
        let b = scale(&train, &impute(&train, &test_b).unwrap());
        assert_eq!(num(&a, 0)[0], num(&b, 0)[1]);
        assert_eq!(num(&a, 0)[1], num(&b, 0)[0]);
    }
}
