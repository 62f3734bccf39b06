//! Column-typed datasets.

use crate::error::{Error, Result};

/// One variable of a dataset.
#[derive(Clone, Debug, PartialEq)]
pub enum Column {
    /// Factor column. `codes[i]` indexes into `levels`.
    Discrete { codes: Vec<u32>, levels: Vec<String> },
    Continuous(Vec<f64>),
}

impl Column {
    /// Factor column from 1-based codes `1..=k`, with levels named "1".."k".
    pub fn from_codes(codes: &[u32], k: u32) -> Result<Self> {
        if let Some(&c) = codes.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::InvalidDataset(format!("code {c} outside 1..={k}")));
        }
        Ok(Column::Discrete {
            codes: codes.iter().map(|&c| c - 1).collect(),
            levels: (1..=k).map(|l| l.to_string()).collect(),
        })
    }

    /// Factor column from labels; levels take their sorted order.
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Self {
        let mut levels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        sort_labels(&mut levels);
        levels.dedup();
        let codes = labels
            .iter()
            .map(|s| levels.iter().position(|l| l == s.as_ref()).expect("level present") as u32)
            .collect();
        Column::Discrete { codes, levels }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Discrete { codes, .. } => codes.len(),
            Column::Continuous(x) => x.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of levels, 0 for continuous columns.
    pub fn num_cat(&self) -> u32 {
        match self {
            Column::Discrete { levels, .. } => levels.len() as u32,
            Column::Continuous(_) => 0,
        }
    }
}

/// Sorts labels numerically when all parse as numbers, lexically otherwise.
pub(crate) fn sort_labels(labels: &mut [String]) {
    let numeric: Option<Vec<f64>> = labels.iter().map(|l| l.trim().parse::<f64>().ok()).collect();
    match numeric {
        Some(_) => labels.sort_by(|a, b| {
            let (x, y): (f64, f64) = (a.trim().parse().unwrap_or(0.0), b.trim().parse().unwrap_or(0.0));
            x.total_cmp(&y).then_with(|| a.cmp(b))
        }),
        None => labels.sort(),
    }
}

/// A validated rectangular dataset: no missing values and every factor
/// level observed at least once.
#[derive(Clone, Debug)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Column>,
    n: usize,
    centered: Vec<Vec<f64>>,
    sumsq: Vec<f64>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.columns == other.columns
    }
}

impl Dataset {
    pub fn new(names: Vec<String>, columns: Vec<Column>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::InvalidDataset(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let n = columns.first().map_or(0, Column::len);
        if let Some(c) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::InvalidDataset(format!(
                "column {:?} has {} rows, expected {n}",
                names[c],
                columns[c].len()
            )));
        }
        for (name, col) in names.iter().zip(&columns) {
            match col {
                Column::Continuous(x) => {
                    if let Some(row) = x.iter().position(|v| !v.is_finite()) {
                        return Err(Error::MissingValue { row: row + 1, column: name.clone() });
                    }
                }
                Column::Discrete { codes, levels } => {
                    if levels.len() < 2 {
                        return Err(Error::SingleLevel { column: name.clone() });
                    }
                    let mut seen = vec![false; levels.len()];
                    for &c in codes {
                        let slot = seen.get_mut(c as usize).ok_or_else(|| {
                            Error::InvalidDataset(format!("code {c} out of range in {name:?}"))
                        })?;
                        *slot = true;
                    }
                    if let Some(l) = seen.iter().position(|&s| !s) {
                        return Err(Error::UnobservedLevel { column: name.clone(), level: l + 1 });
                    }
                }
            }
        }
        let centered: Vec<Vec<f64>> = columns
            .iter()
            .map(|c| match c {
                Column::Continuous(x) => {
                    let mean = x.iter().sum::<f64>() / n.max(1) as f64;
                    x.iter().map(|v| v - mean).collect()
                }
                Column::Discrete { .. } => Vec::new(),
            })
            .collect();
        let sumsq = centered.iter().map(|x: &Vec<f64>| x.iter().map(|v| v * v).sum()).collect();
        Ok(Self { names, columns, n, centered, sumsq })
    }

    /// Dataset of continuous columns named "X1".."Xp".
    pub fn from_continuous(columns: Vec<Vec<f64>>) -> Result<Self> {
        let names = (1..=columns.len()).map(|i| format!("X{i}")).collect();
        Self::new(names, columns.into_iter().map(Column::Continuous).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.columns.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }
    pub fn column(&self, v: usize) -> &Column {
        &self.columns[v - 1]
    }

    pub fn num_cat(&self) -> Vec<u32> {
        self.columns.iter().map(Column::num_cat).collect()
    }

    pub(crate) fn is_discrete(&self, v0: usize) -> bool {
        matches!(self.columns[v0], Column::Discrete { .. })
    }

    pub(crate) fn levels(&self, v0: usize) -> usize {
        self.columns[v0].num_cat() as usize
    }

    pub(crate) fn codes(&self, v0: usize) -> &[u32] {
        match &self.columns[v0] {
            Column::Discrete { codes, .. } => codes,
            Column::Continuous(_) => panic!("column {v0} is continuous"),
        }
    }

    /// Sum of squared deviations of a continuous column.
    pub(crate) fn sumsq(&self, v0: usize) -> f64 {
        self.sumsq[v0]
    }

    /// Mean-centred values of a continuous column.
    pub(crate) fn centered(&self, v0: usize) -> &[f64] {
        &self.centered[v0]
    }
}
