//! Model search: minimal spanning forests and forward stepwise selection.

use std::collections::HashMap;

use crate::chordal::{clique_seq, eligible_pairs, perfect_order, Candidate, MixedState};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Edge, GraphModel};
use crate::parallel;
use crate::stats::{edge_evidence, pairwise_evidence, Measure};
use crate::union_find::UnionFind;

/// Largest supported number of variables.
pub const MAX_VARIABLES: usize = 65_000;

/// Scores closer than this are treated as tied and resolved by `(u, v)`.
const TIE_TOL: f64 = 1e-12;

fn check_size(p: usize) -> Result<()> {
    if p > MAX_VARIABLES {
        Err(Error::TooManyVariables { p, limit: MAX_VARIABLES })
    } else {
        Ok(())
    }
}

/// Builds a validated model. `None` for `edges` gives the empty model; a
/// missing `num_cat` means every vertex is continuous.
pub fn as_graphd(edges: Option<&[(usize, usize)]>, p: usize, num_cat: Option<Vec<u32>>, homog: bool) -> Result<GraphModel> {
    check_size(p)?;
    let edges = edges
        .unwrap_or_default()
        .iter()
        .map(|&(a, b)| Edge::new(a, b))
        .collect::<Result<Vec<_>>>()?;
    GraphModel::new(p, edges, num_cat.unwrap_or_else(|| vec![0; p]), homog)
}

/// Improving pairwise edge: `(score, u, v, df)`, 0-based.
type Weighted = (f64, usize, usize, f64);

/// Scores of all pairs, keeping those strictly below zero, in the order
/// the forest search consumes them.
pub(crate) fn pairwise_weights(ds: &Dataset, measure: &Measure, homog: bool) -> Result<Vec<Weighted>> {
    let p = ds.p();
    let rows = parallel::map_range(p, |u| -> Result<Vec<Weighted>> {
        let mut row = Vec::new();
        for v in u + 1..p {
            let ev = pairwise_evidence(ds, u, v, homog)?;
            let w = measure.score(&ev);
            if w < 0.0 {
                row.push((w, u, v, ev.df));
            }
        }
        Ok(row)
    });
    let mut all = Vec::new();
    for row in rows {
        all.extend(row?);
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut start = 0;
    while start < all.len() {
        let mut end = start + 1;
        while end < all.len() && all[end].0 - all[start].0 <= TIE_TOL {
            end += 1;
        }
        all[start..end].sort_by_key(|w| (w.1, w.2));
        start = end;
    }
    Ok(all)
}

/// Keeps a growing forest free of forbidden paths: each tree of continuous
/// vertices may touch at most one discrete vertex.
struct ForestGuard<'a> {
    discrete: &'a [bool],
    cont: UnionFind,
    boundary: Vec<Option<usize>>,
}

impl<'a> ForestGuard<'a> {
    fn new(discrete: &'a [bool]) -> Self {
        Self { discrete, cont: UnionFind::new(discrete.len()), boundary: vec![None; discrete.len()] }
    }

    /// Records the edge if it keeps the forest clean; assumes no cycle.
    fn try_add(&mut self, a: usize, b: usize) -> bool {
        match (self.discrete[a], self.discrete[b]) {
            (true, true) => true,
            (true, false) | (false, true) => {
                let (c, d) = if self.discrete[a] { (b, a) } else { (a, b) };
                let r = self.cont.find(c);
                if self.boundary[r].is_some() {
                    return false;
                }
                self.boundary[r] = Some(d);
                true
            }
            (false, false) => {
                let (ra, rb) = (self.cont.find(a), self.cont.find(b));
                let merged = match (self.boundary[ra], self.boundary[rb]) {
                    (Some(_), Some(_)) => return false,
                    (x, y) => x.or(y),
                };
                self.cont.union(ra, rb);
                let r = self.cont.find(ra);
                self.boundary[r] = merged;
                true
            }
        }
    }
}

fn base_model(ds: &Dataset, homog: bool) -> Result<GraphModel> {
    let mut g = GraphModel::empty(ds.p()).with_num_cat(ds.num_cat())?.with_vert_names(ds.names().to_vec())?;
    g.set_homog(homog);
    Ok(g)
}

/// Spanning forest minimising the sum of pairwise scores.
///
/// Only edges with a strictly negative score are considered, smallest first.
/// An edge is skipped when it would close a cycle or, for mixed data, open
/// a path between two discrete vertices through continuous ones.
pub fn min_forest(ds: &Dataset, measure: &Measure, homog: bool) -> Result<GraphModel> {
    check_size(ds.p())?;
    let weights = pairwise_weights(ds, measure, homog)?;
    let discrete: Vec<bool> = (0..ds.p()).map(|v| ds.is_discrete(v)).collect();
    let mixed = discrete.iter().any(|&d| d) && discrete.iter().any(|&d| !d);
    let mut uf = UnionFind::new(ds.p());
    let mut guard = ForestGuard::new(&discrete);
    let mut g = base_model(ds, homog)?;
    for (w, u, v, df) in weights {
        if uf.find(u) == uf.find(v) {
            continue;
        }
        if mixed && !guard.try_add(u, v) {
            continue;
        }
        uf.union(u, v);
        g.push_edge(Edge::from_zero(u, v), w, df);
    }
    let k = g.edges().len();
    g.set_forest_provenance(measure.kind(), (k > 0).then_some((1, k)));
    g.set_stat_user(measure.user_label());
    Ok(g)
}

/// Cached score of a candidate together with the separator it was computed for.
struct Scored {
    sep: Vec<usize>,
    score: Option<(f64, f64)>,
}

fn score_candidate(ds: &Dataset, c: &Candidate, measure: &Measure, homog: bool) -> Option<(f64, f64)> {
    let ev = if c.sep.is_empty() {
        pairwise_evidence(ds, c.u, c.v, homog)
    } else {
        edge_evidence(ds, c.u, c.v, &c.sep, homog)
    };
    ev.ok().map(|ev| (measure.score(&ev), ev.df))
}

fn insert_sorted(adj: &mut [Vec<usize>], a: usize, b: usize) {
    for (x, y) in [(a, b), (b, a)] {
        let pos = adj[x].binary_search(&y).unwrap_or_else(|p| p);
        adj[x].insert(pos, y);
    }
}

/// Forward selection from `g0` over add-eligible edges.
///
/// Each step scores every eligible edge by the change in `measure` and adds
/// the most improving one while that change is strictly negative. Scores
/// are cached per edge and recomputed only when the edge's separator
/// changes. Edges whose margins cannot be fitted (singular or empty cells)
/// are skipped. With `join` unset, edges between components are never
/// considered, so the component count is preserved.
pub fn stepw(g0: &GraphModel, ds: &Dataset, measure: &Measure, homog: bool, join: bool) -> Result<GraphModel> {
    check_size(ds.p())?;
    if g0.p() != ds.p() {
        return Err(Error::ArityMismatch { graph: g0.p(), data: ds.p() });
    }
    let ds_cat = ds.num_cat();
    if g0.num_cat().iter().any(|&k| k > 0) {
        if let Some(i) = g0.num_cat().iter().zip(&ds_cat).position(|(a, b)| a != b) {
            return Err(Error::TypeMismatch { vertex: i + 1 });
        }
    }
    let discrete: Vec<bool> = ds_cat.iter().map(|&k| k > 0).collect();
    let mut adj: Vec<Vec<usize>> = g0.adjacency().to_vec();
    if perfect_order(&adj, Some(&discrete)).is_none() {
        return Err(if perfect_order(&adj, None).is_some() {
            Error::NotStronglyDecomposable
        } else {
            Error::NotDecomposable
        });
    }
    let mut g = g0.clone().with_num_cat(ds_cat)?;
    g.set_homog(homog);
    let start = g.edges().len();
    let mut cache: HashMap<(usize, usize), Scored> = HashMap::new();

    loop {
        let order = perfect_order(&adj, Some(&discrete)).expect("search keeps the model decomposable");
        let seq = clique_seq(&adj, &order);
        let state = MixedState::new(&adj, &discrete);
        let cands: Vec<Candidate> = eligible_pairs(&adj, &seq, join)
            .into_iter()
            .filter(|c| state.allows(c.u, c.v))
            .collect();
        let fresh: Vec<&Candidate> = cands
            .iter()
            .filter(|c| cache.get(&(c.u, c.v)).is_none_or(|s| s.sep != c.sep))
            .collect();
        let scores = parallel::map_slice(&fresh, |c| score_candidate(ds, c, measure, homog));
        let mut next: HashMap<(usize, usize), Scored> = HashMap::with_capacity(cands.len());
        for (c, score) in fresh.iter().zip(scores) {
            next.insert((c.u, c.v), Scored { sep: c.sep.clone(), score });
        }
        for c in &cands {
            if let Some(old) = cache.remove(&(c.u, c.v)) {
                next.entry((c.u, c.v)).or_insert(old);
            }
        }
        cache = next;

        let scored: Vec<(usize, usize, f64, f64)> = cands
            .iter()
            .filter_map(|c| cache[&(c.u, c.v)].score.map(|(s, df)| (c.u, c.v, s, df)))
            .collect();
        let Some(min) = scored.iter().map(|s| s.2).min_by(f64::total_cmp) else {
            break;
        };
        if !(min < 0.0) {
            break;
        }
        let &(u, v, s, df) = scored.iter().find(|c| c.2 <= min + TIE_TOL).expect("minimum present");
        g.push_edge(Edge::from_zero(u, v), s, df);
        insert_sorted(&mut adj, u, v);
        cache.remove(&(u, v));
    }

    let end = g.edges().len();
    g.set_stepw_provenance(measure.kind(), (end > start).then_some((start + 1, end)));
    if let Some(label) = measure.user_label() {
        g.set_stat_user(Some(label));
    }
    Ok(g)
}
