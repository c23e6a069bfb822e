use std::collections::HashSet;
use std::sync::Arc;

use super::{Result, TabularError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Categorical,
    Numerical,
}

/// Cell storage of a column. Missing entries are `None`; for categorical
/// columns the missing marker is never a level.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    /// Codes index into `levels`, which lists distinct strings in order of
    /// first appearance in the source file.
    Categorical {
        codes: Vec<Option<u32>>,
        levels: Arc<Vec<String>>,
    },
    Numerical(Vec<Option<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    pub fn numerical(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Self {
            name: name.into(),
            data: ColumnData::Numerical(values),
        }
    }

    /// Builds a categorical column from raw strings; `None` marks a missing cell.
    pub fn categorical<S: AsRef<str>>(name: impl Into<String>, values: &[Option<S>]) -> Self {
        let mut levels: Vec<String> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let codes = values
            .iter()
            .map(|v| {
                v.as_ref().map(|s| {
                    let s = s.as_ref();
                    *index.entry(s.to_string()).or_insert_with(|| {
                        levels.push(s.to_string());
                        (levels.len() - 1) as u32
                    })
                })
            })
            .collect();
        Self {
            name: name.into(),
            data: ColumnData::Categorical {
                codes,
                levels: Arc::new(levels),
            },
        }
    }

    pub fn kind(&self) -> ColumnKind {
        match self.data {
            ColumnData::Categorical { .. } => ColumnKind::Categorical,
            ColumnData::Numerical(_) => ColumnKind::Numerical,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { codes, .. } => codes.len(),
            ColumnData::Numerical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of distinct non-missing values present in this column.
    pub fn cardinality(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { codes, .. } => {
                codes.iter().flatten().collect::<HashSet<_>>().len()
            }
            ColumnData::Numerical(v) => v
                .iter()
                .flatten()
                .map(|x| x.to_bits())
                .collect::<HashSet<_>>()
                .len(),
        }
    }

    pub fn missing_count(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { codes, .. } => codes.iter().filter(|c| c.is_none()).count(),
            ColumnData::Numerical(v) => v.iter().filter(|c| c.is_none()).count(),
        }
    }

    /// String value of a categorical cell.
    pub fn level_at(&self, row: usize) -> Option<&str> {
        match &self.data {
            ColumnData::Categorical { codes, levels } => {
                codes[row].map(|c| levels[c as usize].as_str())
            }
            ColumnData::Numerical(_) => None,
        }
    }

    fn select_rows(&self, idx: &[usize]) -> Column {
        let data = match &self.data {
            ColumnData::Categorical { codes, levels } => ColumnData::Categorical {
                codes: idx.iter().map(|&i| codes[i]).collect(),
                levels: Arc::clone(levels),
            },
            ColumnData::Numerical(v) => ColumnData::Numerical(idx.iter().map(|&i| v[i]).collect()),
        };
        Column {
            name: self.name.clone(),
            data,
        }
    }
}

/// Binary-classification dataset. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    columns: Vec<Column>,
    target: Vec<u8>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: Vec<Column>, target: Vec<u8>) -> Result<Self> {
        if target.is_empty() {
            return Err(TabularError::EmptyDataset);
        }
        if let Some((row, v)) = target.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(TabularError::NonBinaryTarget {
                row,
                value: v.to_string(),
            });
        }
        for c in &columns {
            if c.len() != target.len() {
                return Err(TabularError::LengthMismatch {
                    column: c.name.clone(),
                    got: c.len(),
                    expected: target.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            columns,
            target,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn target(&self) -> &[u8] {
        &self.target
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn categorical_count(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| c.kind() == ColumnKind::Categorical)
            .count()
    }

    /// Row subset (a "view"), keeping row order as given.
    pub fn select_rows(&self, idx: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            columns: self.columns.iter().map(|c| c.select_rows(idx)).collect(),
            target: idx.iter().map(|&i| self.target[i]).collect(),
        }
    }

    pub(crate) fn with_columns(&self, columns: Vec<Column>) -> Dataset {
        Dataset {
            name: self.name.clone(),
            columns,
            target: self.target.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categorical_levels_follow_first_appearance() {
        let c = Column::categorical("c", &[Some("b"), None, Some("a"), Some("b")]);
        match &c.data {
            ColumnData::Categorical { codes, levels } => {
                assert_eq!(levels.as_slice(), &["b".to_string(), "a".to_string()]);
                assert_eq!(codes, &vec![Some(0), None, Some(1), Some(0)]);
            }
            _ => unreachable!(),
        }
        assert_eq!(c.cardinality(), 2);
        assert_eq!(c.missing_count(), 1);
    }

    #[test]
    fn rejects_bad_shapes() {
        let c = Column::numerical("x", vec![Some(1.0)]);
        assert!(matches!(
            Dataset::new("d", vec![c], vec![0, 1]),
            Err(TabularError::LengthMismatch { .. })
        ));
        assert_eq!(
            Dataset::new("d", vec![], vec![]),
            Err(TabularError::EmptyDataset)
        );
        assert!(matches!(
            Dataset::new("d", vec![], vec![2]),
            Err(TabularError::NonBinaryTarget { .. })
        ));
    }
}
