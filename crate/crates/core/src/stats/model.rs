use std::fmt;

use serde::Serialize;

use crate::chordal::{clique_seq, eligible_separator, is_perfect, perfect_order, MixedState};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Edge, GraphModel};
use crate::parallel;
use crate::stats::margin::{edge_evidence, margin0, margin_dim};
use crate::stats::{FitResult, Measure};

fn check_types(g: &GraphModel, ds: &Dataset) -> Result<()> {
    if g.p() != ds.p() {
        return Err(Error::ArityMismatch { graph: g.p(), data: ds.p() });
    }
    if g.num_cat().iter().all(|&k| k == 0) {
        return Ok(());
    }
    match g.num_cat().iter().zip(ds.num_cat()).position(|(&a, b)| a != b) {
        Some(i) => Err(Error::TypeMismatch { vertex: i + 1 }),
        None => Ok(()),
    }
}

fn mask(num_cat: &[u32]) -> Vec<bool> {
    num_cat.iter().map(|&k| k > 0).collect()
}

/// Perfect ordering with discrete vertices first, or the reason there is none.
fn ordering(adj: &[Vec<usize>], discrete: &[bool]) -> Result<Vec<usize>> {
    perfect_order(adj, Some(discrete)).ok_or_else(|| match perfect_order(adj, None) {
        Some(_) => Error::NotStronglyDecomposable,
        None => Error::NotDecomposable,
    })
}

/// −2·log-likelihood, AIC and BIC of a decomposable model, assembled from
/// saturated clique and separator margins.
pub fn fit(g: &GraphModel, ds: &Dataset, homog: bool) -> Result<FitResult> {
    check_types(g, ds)?;
    let adj = g.adjacency();
    let order = ordering(adj, &mask(&ds.num_cat()))?;
    let seq = clique_seq(adj, &order);
    let terms: Vec<(&[usize], f64)> = seq
        .cliques
        .iter()
        .map(|c| (c.as_slice(), 1.0))
        .chain(seq.separators.iter().filter(|s| !s.is_empty()).map(|s| (s.as_slice(), -1.0)))
        .collect();
    let values = parallel::map_slice(&terms, |&(vars, _)| margin0(ds, vars, homog));
    let (mut m2ll, mut dim) = (0.0, 0.0);
    for ((_, sign), v) in terms.iter().zip(values) {
        let v = v?;
        m2ll += sign * v.m2ll;
        dim += sign * v.dim;
    }
    Ok(FitResult::new(dim, m2ll, ds.n()))
}

/// Total dimension of a model and the increment due to each edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelDim {
    pub total: f64,
    /// Aligned with the model's edge list.
    pub per_edge: Vec<f64>,
}

fn increment(num_cat: &[u32], u: usize, v: usize, sep: &[usize], homog: bool) -> f64 {
    let with = |extra: &[usize]| {
        let mut m: Vec<usize> = sep.iter().chain(extra).copied().collect();
        m.sort_unstable();
        margin_dim(num_cat, &m, homog)
    };
    with(&[u, v]) - with(&[u]) - with(&[v]) + with(&[])
}

fn insert_edge(adj: &mut [Vec<usize>], a: usize, b: usize) {
    for (x, y) in [(a, b), (b, a)] {
        let pos = adj[x].binary_search(&y).unwrap_or_else(|p| p);
        adj[x].insert(pos, y);
    }
}

/// Increments along `order` (indices into `edges`), or `None` as soon as a
/// prefix stops being (strongly) decomposable.
fn increments_along(
    p: usize,
    edges: &[Edge],
    order: &[usize],
    num_cat: &[u32],
    homog: bool,
) -> Option<Vec<f64>> {
    let discrete = mask(num_cat);
    let mut adj = vec![Vec::new(); p];
    let mut out = vec![0.0; edges.len()];
    for &i in order {
        let (a, b) = edges[i].zero();
        let sep = eligible_separator(&adj, a, b)?;
        if !MixedState::new(&adj, &discrete).allows(a, b) {
            return None;
        }
        out[i] = increment(num_cat, a, b, &sep, homog);
        insert_edge(&mut adj, a, b);
    }
    Some(out)
}

/// Number of free parameters of `g` and the share of each edge.
///
/// Increments follow the recorded edge order. When some prefix of that
/// order is not decomposable, edges are instead added vertex by vertex along
/// a perfect ordering, so every intermediate model stays decomposable; the
/// values are still reported in the recorded order.
pub fn model_dim(g: &GraphModel, homog: bool) -> Result<ModelDim> {
    let num_cat = g.num_cat();
    let adj = g.adjacency();
    let order = ordering(adj, &mask(num_cat))?;
    let p = g.p();
    let edges = g.edges();
    let recorded: Vec<usize> = (0..edges.len()).collect();
    let per_edge = match increments_along(p, edges, &recorded, num_cat, homog) {
        Some(v) => v,
        None => {
            let mut pos = vec![0; p];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            let mut fallback = recorded;
            fallback.sort_by_key(|&i| {
                let (a, b) = edges[i].zero();
                (pos[a].max(pos[b]), pos[a].min(pos[b]))
            });
            increments_along(p, edges, &fallback, num_cat, homog).expect("perfect ordering prefix")
        }
    };
    let empty: f64 = (0..p).map(|v| margin_dim(num_cat, &[v], homog)).sum();
    Ok(ModelDim { total: empty + per_edge.iter().sum::<f64>(), per_edge })
}

/// One model generator: a clique split by variable type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub discrete: Vec<String>,
    pub continuous: Vec<String>,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.discrete.join(",");
        let c = self.continuous.join(",");
        match (d.is_empty(), c.is_empty()) {
            (false, false) => write!(f, "[{d}|{c}]"),
            (true, _) => write!(f, "[{c}]"),
            (false, true) => write!(f, "[{d}]"),
        }
    }
}

/// Clique generators of a decomposable model in perfect-sequence order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelFormula {
    pub generators: Vec<Generator>,
}

impl fmt::Display for ModelFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn model_formula(g: &GraphModel) -> Result<ModelFormula> {
    let adj = g.adjacency();
    let order = ordering(adj, &mask(g.num_cat()))?;
    let names = g.vert_names();
    let generators = clique_seq(adj, &order)
        .cliques
        .iter()
        .map(|c| {
            let (d, k): (Vec<usize>, Vec<usize>) = c.iter().partition(|&&v| g.num_cat()[v] > 0);
            Generator {
                discrete: d.iter().map(|&v| names[v].clone()).collect(),
                continuous: k.iter().map(|&v| names[v].clone()).collect(),
            }
        })
        .collect();
    Ok(ModelFormula { generators })
}

/// Change in `measure` from adding the add-eligible edge `e` to `g`.
pub fn delta_stepw(g: &GraphModel, ds: &Dataset, e: Edge, measure: &Measure, homog: bool) -> Result<f64> {
    check_types(g, ds)?;
    let (u, v) = (g.check_vertex(e.u)?, g.check_vertex(e.v)?);
    let adj = g.adjacency();
    let discrete = mask(&ds.num_cat());
    let order = ordering(adj, &discrete)?;
    debug_assert!(is_perfect(adj, &order));
    let sep = eligible_separator(adj, u, v).ok_or(Error::NotEligible(e.u, e.v))?;
    if !MixedState::new(adj, &discrete).allows(u, v) {
        return Err(Error::NotEligible(e.u, e.v));
    }
    Ok(measure.score(&edge_evidence(ds, u, v, &sep, homog)?))
}
