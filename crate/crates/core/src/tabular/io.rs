use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use super::dataset::{Column, ColumnKind, Dataset};
use super::{Result, TabularError};

/// Per-column kind overrides, keyed by header name.
pub type KindHints = HashMap<String, ColumnKind>;

fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "?"
}

/// Loads a CSV file: header row, comma separated, empty cell or `?` = missing.
///
/// A column is categorical if it is hinted so, or if any non-missing cell does
/// not parse as a number. The dataset is named after the file stem.
pub fn load_csv(path: &Path, target_column: &str, hints: &KindHints) -> Result<Dataset> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| TabularError::Io(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(
        || "dataset".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    parse_csv(&name, &text, target_column, hints)
}

pub fn parse_csv(
    name: &str,
    text: &str,
    target_column: &str,
    hints: &KindHints,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| TabularError::Csv(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let target_idx = headers
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| TabularError::MissingTarget(target_column.to_string()))?;

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    for record in reader.records() {
        let record = record.map_err(|e| TabularError::Csv(e.to_string()))?;
        for (j, col) in cells.iter_mut().enumerate() {
            col.push(record.get(j).unwrap_or("").trim().to_string());
        }
    }
    if cells[target_idx].is_empty() {
        return Err(TabularError::EmptyDataset);
    }

    let target = cells[target_idx]
        .iter()
        .enumerate()
        .map(|(row, v)| match v.parse::<f64>() {
            Ok(0.0) => Ok(0u8),
            Ok(1.0) => Ok(1u8),
            _ => Err(TabularError::NonBinaryTarget {
                row,
                value: v.clone(),
            }),
        })
        .collect::<Result<Vec<u8>>>()?;

    let mut columns = Vec::with_capacity(headers.len() - 1);
    for (j, header) in headers.iter().enumerate() {
        if j == target_idx {
            continue;
        }
        let raw = &cells[j];
        let numeric_ok = raw
            .iter()
            .all(|c| is_missing(c) || c.parse::<f64>().is_ok());
        let kind = hints.get(header).copied().unwrap_or(if numeric_ok {
            ColumnKind::Numerical
        } else {
            ColumnKind::Categorical
        });
        let column = match kind {
            ColumnKind::Numerical => {
                let values = raw
                    .iter()
                    .map(|c| {
                        if is_missing(c) {
                            Ok(None)
                        } else {
                            c.parse::<f64>().map(Some).map_err(|_| {
                                TabularError::Csv(format!(
                                    "column `{header}`: `{c}` is not numeric"
                                ))
                            })
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Column::numerical(header.clone(), values)
            }
            ColumnKind::Categorical => {
                let values: Vec<Option<&str>> = raw
                    .iter()
                    .map(|c| (!is_missing(c)).then_some(c.as_str()))
                    .collect();
                Column::categorical(header.clone(), &values)
            }
        };
        columns.push(column);
    }
    Dataset::new(name, columns, target)
}
