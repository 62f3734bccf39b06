//! CSV ingestion into typed datasets.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::data::{Column, Dataset};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Discrete,
    Continuous,
}

/// Name, kind and (for factors) sorted level labels of an ingested column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    pub levels: Vec<String>,
}

pub fn column_specs(ds: &Dataset) -> Vec<ColumnSpec> {
    ds.names()
        .iter()
        .zip(ds.columns())
        .map(|(name, col)| match col {
            Column::Discrete { levels, .. } => ColumnSpec {
                name: name.clone(),
                kind: ColumnKind::Discrete,
                levels: levels.clone(),
            },
            Column::Continuous(_) => ColumnSpec {
                name: name.clone(),
                kind: ColumnKind::Continuous,
                levels: Vec::new(),
            },
        })
        .collect()
}

/// Reads a comma-separated file with a header row.
///
/// Columns whose cells all parse as numbers are continuous, the rest are
/// factors. `overrides` forces a kind by column name.
pub fn ingest_csv(path: impl AsRef<Path>, overrides: &HashMap<String, ColumnKind>) -> Result<Dataset> {
    ingest_reader(std::fs::File::open(path)?, overrides)
}

pub fn ingest_reader<R: Read>(reader: R, overrides: &HashMap<String, ColumnKind>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if let Some(unknown) = overrides.keys().find(|k| !names.contains(k)) {
        return Err(Error::InvalidArgument(format!("no column named {unknown:?}")));
    }
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); names.len()];
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (col, field) in record.iter().enumerate() {
            if field.is_empty() || field == "NA" {
                return Err(Error::MissingValue { row: row + 1, column: names[col].clone() });
            }
            cells[col].push(field.to_string());
        }
    }
    let columns = names
        .iter()
        .zip(cells)
        .map(|(name, raw)| {
            let numeric: Option<Vec<f64>> = raw.iter().map(|s| s.parse::<f64>().ok()).collect();
            match (overrides.get(name), numeric) {
                (Some(ColumnKind::Discrete), _) | (None, None) => Ok(Column::from_labels(&raw)),
                (Some(ColumnKind::Continuous) | None, Some(x)) => Ok(Column::Continuous(x)),
                (Some(ColumnKind::Continuous), None) => {
                    Err(Error::InvalidDataset(format!("column {name:?} is not numeric")))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(names, columns)
}
