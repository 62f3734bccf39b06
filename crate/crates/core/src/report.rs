//! Plain-text tables for the analysis commands.

use std::collections::BTreeMap;

use crate::graph::GraphModel;

const WIDTH: usize = 80;

/// Two right-aligned rows of labels and values, wrapped into blocks that fit
/// within 80 columns.
pub fn two_row_table(labels: &[String], values: &[String]) -> String {
    let widths: Vec<usize> = labels.iter().zip(values).map(|(a, b)| a.len().max(b.len())).collect();
    let mut out = String::new();
    let mut start = 0;
    while start < labels.len() {
        let mut end = start;
        let mut used = 0;
        while end < labels.len() && (end == start || used + 1 + widths[end] <= WIDTH) {
            used += widths[end] + usize::from(end > start);
            end += 1;
        }
        if start > 0 {
            out.push('\n');
        }
        for row in [labels, values] {
            let cells: Vec<String> = (start..end).map(|i| format!("{:>w$}", row[i], w = widths[i])).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        start = end;
    }
    out
}

/// Frequency of each vertex degree.
pub fn degree_table(g: &GraphModel) -> String {
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for d in g.adjacency().iter().map(Vec::len) {
        *freq.entry(d).or_default() += 1;
    }
    let labels: Vec<String> = freq.keys().map(ToString::to_string).collect();
    let counts: Vec<String> = freq.values().map(ToString::to_string).collect();
    two_row_table(&labels, &counts)
}

fn dist(d: Option<usize>) -> String {
    d.map_or_else(|| "Inf".to_string(), |d| d.to_string())
}

/// Distances from one vertex, with `Inf` for unreachable vertices.
pub fn distance_row(dists: &[Option<usize>]) -> String {
    let labels: Vec<String> = (1..=dists.len()).map(|v| v.to_string()).collect();
    let values: Vec<String> = dists.iter().map(|&d| dist(d)).collect();
    two_row_table(&labels, &values)
}

/// Full distance matrix with 1-based row and column headers.
pub fn distance_matrix(m: &[Vec<Option<usize>>]) -> String {
    let p = m.len();
    let cells: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(|&d| dist(d)).collect()).collect();
    let w = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain(std::iter::once(p.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = format!("{:>w$}", "");
    for v in 1..=p {
        out.push_str(&format!(" {v:>w$}"));
    }
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        out.push_str(&format!("{:>w$}", i + 1));
        for c in row {
            out.push_str(&format!(" {c:>w$}"));
        }
        out.push('\n');
    }
    out
}

/// Component id of each vertex.
pub fn component_table(g: &GraphModel) -> String {
    let ids = g.connected_components();
    let labels: Vec<String> = (1..=ids.len()).map(|v| v.to_string()).collect();
    let values: Vec<String> = ids.iter().map(ToString::to_string).collect();
    two_row_table(&labels, &values)
}
