use std::f64::consts::PI;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::log_det_spd;
use crate::stats::EdgeEvidence;

/// A set of variables split into its discrete and continuous parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginSpec {
    /// 1-based discrete vertices, ascending.
    pub discrete: Vec<usize>,
    /// 1-based continuous vertices, ascending.
    pub continuous: Vec<usize>,
    pub homog: bool,
}

impl MarginSpec {
    pub fn new(ds: &Dataset, vertices: &[usize], homog: bool) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if let Some(&v) = vs.iter().find(|&&v| v == 0 || v > ds.p()) {
            return Err(Error::VertexOutOfRange { vertex: v, p: ds.p() });
        }
        let (discrete, continuous) = vs.into_iter().partition(|&v| ds.is_discrete(v - 1));
        Ok(Self { discrete, continuous, homog })
    }

    fn vars0(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.discrete.iter().chain(&self.continuous).map(|&x| x - 1).collect();
        v.sort_unstable();
        v
    }
}

/// −2·log-likelihood and dimension of the saturated model on a margin,
/// evaluated at its maximum likelihood estimate.
pub fn margin_loglik(ds: &Dataset, m: &MarginSpec) -> Result<(f64, f64)> {
    let r = margin0(ds, &m.vars0(), m.homog)?;
    Ok((r.m2ll, r.dim))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct MarginValue {
    pub m2ll: f64,
    pub dim: f64,
}

fn dim_formula(cells: f64, g: usize, homog: bool) -> f64 {
    let g = g as f64;
    let cov = g * (g + 1.0) / 2.0;
    if homog {
        (cells - 1.0) + cells * g + cov
    } else {
        (cells - 1.0) + cells * (g + cov)
    }
}

/// Dimension of the saturated model on `vars` (0-based).
pub(crate) fn margin_dim(num_cat: &[u32], vars: &[usize], homog: bool) -> f64 {
    if vars.is_empty() {
        return 0.0;
    }
    let cells: f64 = vars.iter().filter(|&&v| num_cat[v] > 0).map(|&v| num_cat[v] as f64).product();
    let g = vars.iter().filter(|&&v| num_cat[v] == 0).count();
    dim_formula(cells, g, homog)
}

struct Cells {
    row_cell: Vec<usize>,
    counts: Vec<usize>,
    keys: Vec<u64>,
    total: u64,
}

fn group_cells(ds: &Dataset, disc: &[usize]) -> Result<Cells> {
    let n = ds.n();
    if disc.is_empty() {
        return Ok(Cells { row_cell: vec![0; n], counts: vec![n], keys: vec![0], total: 1 });
    }
    let mut total: u64 = 1;
    for &d in disc {
        total = total
            .checked_mul(ds.levels(d) as u64)
            .ok_or_else(|| Error::InvalidArgument("too many discrete cells in margin".into()))?;
    }
    let mut row_key = vec![0u64; n];
    for &d in disc {
        let k = ds.levels(d) as u64;
        for (key, &c) in row_key.iter_mut().zip(ds.codes(d)) {
            *key = *key * k + c as u64;
        }
    }
    let mut keys = row_key.clone();
    keys.sort_unstable();
    keys.dedup();
    let mut counts = vec![0; keys.len()];
    let row_cell = row_key
        .iter()
        .map(|k| {
            let i = keys.binary_search(k).expect("key present");
            counts[i] += 1;
            i
        })
        .collect();
    Ok(Cells { row_cell, counts, keys, total })
}

fn first_empty_cell(ds: &Dataset, disc: &[usize], keys: &[u64]) -> Vec<usize> {
    let missing = (0u64..).find(|k| keys.binary_search(k).is_err()).unwrap_or(0);
    let mut rem = missing;
    let mut cell = vec![0; disc.len()];
    for (slot, &d) in cell.iter_mut().zip(disc).rev() {
        let k = ds.levels(d) as u64;
        *slot = (rem % k) as usize + 1;
        rem /= k;
    }
    cell
}

/// Saturated margin on `vars` (0-based, ascending).
pub(crate) fn margin0(ds: &Dataset, vars: &[usize], homog: bool) -> Result<MarginValue> {
    if vars.is_empty() {
        return Ok(MarginValue { m2ll: 0.0, dim: 0.0 });
    }
    let (disc, cont): (Vec<usize>, Vec<usize>) = vars.iter().partition(|&&v| ds.is_discrete(v));
    if let Some(&v) = cont.iter().find(|&&v| ds.sumsq(v) <= 0.0) {
        return Err(Error::ZeroVariance { column: v + 1 });
    }
    let n = ds.n();
    let nf = n as f64;
    let cells = group_cells(ds, &disc)?;
    let g = cont.len();
    let dim = dim_formula(cells.total as f64, g, homog);

    let mut m2ll: f64 = if disc.is_empty() {
        0.0
    } else {
        -2.0 * cells.counts.iter().map(|&c| c as f64 * (c as f64 / nf).ln()).sum::<f64>()
    };
    if g == 0 {
        return Ok(MarginValue { m2ll, dim });
    }
    let heterogeneous = !homog && !disc.is_empty();
    if heterogeneous && (cells.keys.len() as u64) < cells.total {
        return Err(Error::EmptyCell {
            margin: vars.iter().map(|v| v + 1).collect(),
            cell: first_empty_cell(ds, &disc, &cells.keys),
        });
    }

    let k = cells.counts.len();
    let cols: Vec<&[f64]> = cont.iter().map(|&v| ds.centered(v)).collect();
    let mut mean = vec![0.0; k * g];
    for (a, col) in cols.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            mean[cells.row_cell[r] * g + a] += x;
        }
    }
    for (c, &cnt) in cells.counts.iter().enumerate() {
        for a in 0..g {
            mean[c * g + a] /= cnt as f64;
        }
    }
    let mut ss = vec![0.0; k * g * g];
    let mut dev = vec![0.0; g];
    for r in 0..n {
        let c = cells.row_cell[r];
        for a in 0..g {
            dev[a] = cols[a][r] - mean[c * g + a];
        }
        let block = &mut ss[c * g * g..(c + 1) * g * g];
        for a in 0..g {
            for b in 0..=a {
                block[a * g + b] += dev[a] * dev[b];
            }
        }
    }
    for block in ss.chunks_mut(g * g) {
        for a in 0..g {
            for b in 0..a {
                block[b * g + a] = block[a * g + b];
            }
        }
    }
    let singular = || Error::SingularCovariance { margin: vars.iter().map(|v| v + 1).collect() };
    let gf = g as f64;
    let const_term = gf * (2.0 * PI).ln() + gf;
    if heterogeneous {
        for (c, block) in ss.chunks(g * g).enumerate() {
            let nc = cells.counts[c] as f64;
            let cov: Vec<f64> = block.iter().map(|x| x / nc).collect();
            let ld = log_det_spd(&cov, g).ok_or_else(singular)?;
            m2ll += nc * (const_term + ld);
        }
    } else {
        let mut pooled = vec![0.0; g * g];
        for block in ss.chunks(g * g) {
            for (p, x) in pooled.iter_mut().zip(block) {
                *p += x;
            }
        }
        pooled.iter_mut().for_each(|x| *x /= nf);
        let ld = log_det_spd(&pooled, g).ok_or_else(singular)?;
        m2ll += nf * (const_term + ld);
    }
    Ok(MarginValue { m2ll, dim })
}

/// Dimension with the cell count replaced by the number of occupied cells.
pub(crate) fn occupied_dim(ds: &Dataset, vars: &[usize], homog: bool) -> Result<f64> {
    if vars.is_empty() {
        return Ok(0.0);
    }
    let (disc, cont): (Vec<usize>, Vec<usize>) = vars.iter().partition(|&&v| ds.is_discrete(v));
    let cells = group_cells(ds, &disc)?;
    Ok(dim_formula(cells.keys.len() as f64, cont.len(), homog))
}

fn union(sep: &[usize], extra: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = sep.iter().chain(extra).copied().collect();
    v.sort_unstable();
    v
}

/// Deviance and added dimension for the edge `(u, v)` given separator `sep`
/// (all 0-based), from the four margins `uS`, `vS`, `S` and `uvS`.
pub(crate) fn edge_evidence(ds: &Dataset, u: usize, v: usize, sep: &[usize], homog: bool) -> Result<EdgeEvidence> {
    let us = union(sep, &[u]);
    let vs = union(sep, &[v]);
    let uvs = union(sep, &[u, v]);
    let m_us = margin0(ds, &us, homog)?;
    let m_vs = margin0(ds, &vs, homog)?;
    let m_s = margin0(ds, sep, homog)?;
    let m_uvs = margin0(ds, &uvs, homog)?;
    Ok(EdgeEvidence {
        u: u.min(v) + 1,
        v: u.max(v) + 1,
        separator: sep.iter().map(|x| x + 1).collect(),
        deviance: m_us.m2ll + m_vs.m2ll - m_s.m2ll - m_uvs.m2ll,
        df: m_uvs.dim - m_us.dim - m_vs.dim + m_s.dim,
        n: ds.n(),
    })
}
