use serde::Serialize;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::log_det_spd;
use crate::stats::margin::{edge_evidence, occupied_dim};
use crate::stats::{EdgeEvidence, Measure};

/// Two-variable edge evidence from closed forms (0-based vertices).
pub(crate) fn pairwise_evidence(ds: &Dataset, u: usize, v: usize, homog: bool) -> Result<EdgeEvidence> {
    let n = ds.n();
    let nf = n as f64;
    let (deviance, df) = match (ds.is_discrete(u), ds.is_discrete(v)) {
        (false, false) => {
            let (su, sv) = (ds.sumsq(u), ds.sumsq(v));
            for (s, x) in [(su, u), (sv, v)] {
                if s <= 0.0 {
                    return Err(Error::ZeroVariance { column: x + 1 });
                }
            }
            let c: f64 = ds.centered(u).iter().zip(ds.centered(v)).map(|(a, b)| a * b).sum();
            if log_det_spd(&[su / nf, c / nf, c / nf, sv / nf], 2).is_none() {
                return Err(Error::SingularCovariance { margin: vec![u.min(v) + 1, u.max(v) + 1] });
            }
            let r2 = c * c / (su * sv);
            (-nf * (1.0 - r2).ln(), 1.0)
        }
        (true, true) => {
            let (ku, kv) = (ds.levels(u), ds.levels(v));
            let mut table = vec![0usize; ku * kv];
            for (&a, &b) in ds.codes(u).iter().zip(ds.codes(v)) {
                table[a as usize * kv + b as usize] += 1;
            }
            let mut row = vec![0usize; ku];
            let mut col = vec![0usize; kv];
            for i in 0..ku {
                for j in 0..kv {
                    row[i] += table[i * kv + j];
                    col[j] += table[i * kv + j];
                }
            }
            let mut g2 = 0.0;
            for i in 0..ku {
                for j in 0..kv {
                    let o = table[i * kv + j] as f64;
                    if o > 0.0 {
                        g2 += o * (o * nf / (row[i] as f64 * col[j] as f64)).ln();
                    }
                }
            }
            (2.0 * g2, ((ku - 1) * (kv - 1)) as f64)
        }
        (du, _) => {
            let (d, x) = if du { (u, v) } else { (v, u) };
            let ss = ds.sumsq(x);
            if ss <= 0.0 {
                return Err(Error::ZeroVariance { column: x + 1 });
            }
            let k = ds.levels(d);
            let mut cnt = vec![0usize; k];
            let mut sum = vec![0.0; k];
            for (&c, &val) in ds.codes(d).iter().zip(ds.centered(x)) {
                cnt[c as usize] += 1;
                sum[c as usize] += val;
            }
            let mean: Vec<f64> = sum.iter().zip(&cnt).map(|(s, &c)| s / c as f64).collect();
            let mut within = vec![0.0; k];
            for (&c, &val) in ds.codes(d).iter().zip(ds.centered(x)) {
                let e = val - mean[c as usize];
                within[c as usize] += e * e;
            }
            let singular = || Error::SingularCovariance { margin: vec![u.min(v) + 1, u.max(v) + 1] };
            let marg = ss / nf;
            if homog {
                let pooled = within.iter().sum::<f64>() / nf;
                if !(pooled > 0.0) {
                    return Err(singular());
                }
                (nf * (marg / pooled).ln(), (k - 1) as f64)
            } else {
                let mut dev = nf * marg.ln();
                for j in 0..k {
                    let var = within[j] / cnt[j] as f64;
                    if !(var > 0.0) {
                        return Err(singular());
                    }
                    dev -= cnt[j] as f64 * var.ln();
                }
                (dev, 2.0 * (k - 1) as f64)
            }
        }
    };
    Ok(EdgeEvidence { u: u.min(v) + 1, v: u.max(v) + 1, separator: Vec::new(), deviance, df, n })
}

/// Change in `measure` from adding the edge `(u, v)` to the two-variable
/// independence model. Negative values mean the edge improves the measure.
pub fn pairwise_weight(ds: &Dataset, u: usize, v: usize, measure: &Measure, homog: bool) -> Result<f64> {
    let (a, b) = check_pair(ds, u, v)?;
    Ok(measure.score(&pairwise_evidence(ds, a, b, homog)?))
}

fn check_pair(ds: &Dataset, u: usize, v: usize) -> Result<(usize, usize)> {
    for x in [u, v] {
        if x == 0 || x > ds.p() {
            return Err(Error::VertexOutOfRange { vertex: x, p: ds.p() });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok((u - 1, v - 1))
}

/// Conditional independence test of `u` and `v` given `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CiTest {
    pub deviance: f64,
    /// Nominal degrees of freedom less those lost to empty cells.
    pub df: f64,
}

/// Deviance of `u ⊥ v | s` against the saturated margin on `{u, v} ∪ s`.
///
/// The adjusted degrees of freedom use the usual inclusion-exclusion over
/// the four margins `uvS`, `uS`, `vS`, `S`, with each margin's cell count
/// replaced by the number of cells actually observed. Fully observed tables
/// give the nominal value. The result is clamped at zero.
pub fn ci_test(ds: &Dataset, u: usize, v: usize, s: &[usize], homog: bool) -> Result<CiTest> {
    let (a, b) = check_pair(ds, u, v)?;
    let mut sep = Vec::with_capacity(s.len());
    for &x in s {
        if x == 0 || x > ds.p() {
            return Err(Error::VertexOutOfRange { vertex: x, p: ds.p() });
        }
        if x == u || x == v {
            return Err(Error::InvalidArgument(format!("vertex {x} is both tested and conditioned on")));
        }
        sep.push(x - 1);
    }
    sep.sort_unstable();
    sep.dedup();
    let ev = edge_evidence(ds, a, b, &sep, homog)?;
    let with = |extra: &[usize]| {
        let mut m: Vec<usize> = sep.iter().chain(extra).copied().collect();
        m.sort_unstable();
        occupied_dim(ds, &m, homog)
    };
    let df = with(&[a, b])? - with(&[a])? - with(&[b])? + with(&[])?;
    Ok(CiTest { deviance: ev.deviance, df: df.max(0.0) })
}
