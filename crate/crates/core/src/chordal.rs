//! Chordal graph machinery: maximum cardinality search, perfect sequences,
//! junction trees and add-eligible edges.
//!
//! The public functions take a [`GraphModel`] and speak 1-based vertices.
//! The `pub(crate)` helpers work on 0-based sorted adjacency lists so the
//! searches can reuse them without rebuilding models.

use std::collections::{BTreeSet, HashMap};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{components, Edge, GraphModel};
use crate::union_find::UnionFind;

/// Maximum cardinality search ordering (0-based).
///
/// Picks the unnumbered vertex with most numbered neighbours, smallest index
/// first on ties. With `discrete` set, every discrete vertex is numbered
/// before any continuous one. `root`, if given, is numbered first.
pub(crate) fn mcs_order(adj: &[Vec<usize>], discrete: Option<&[bool]>, root: Option<usize>) -> Vec<usize> {
    let p = adj.len();
    let class = |v: usize| match discrete {
        Some(d) if !d[v] => 1,
        _ => 0,
    };
    let mut weight = vec![0usize; p];
    let mut numbered = vec![false; p];
    let mut buckets: [Vec<BTreeSet<usize>>; 2] = [vec![BTreeSet::new()], vec![BTreeSet::new()]];
    let mut max_w = [0usize; 2];
    for v in 0..p {
        buckets[class(v)][0].insert(v);
    }
    let mut order = Vec::with_capacity(p);
    let mut next = root;
    for _ in 0..p {
        let v = match next.take() {
            Some(r) => r,
            None => {
                let c = if buckets[0].iter().any(|b| !b.is_empty()) { 0 } else { 1 };
                while buckets[c][max_w[c]].is_empty() {
                    max_w[c] -= 1;
                }
                *buckets[c][max_w[c]].first().expect("non-empty bucket")
            }
        };
        let c = class(v);
        buckets[c][weight[v]].remove(&v);
        numbered[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if numbered[w] {
                continue;
            }
            let cw = class(w);
            buckets[cw][weight[w]].remove(&w);
            weight[w] += 1;
            if buckets[cw].len() <= weight[w] {
                buckets[cw].push(BTreeSet::new());
            }
            buckets[cw][weight[w]].insert(w);
            max_w[cw] = max_w[cw].max(weight[w]);
        }
    }
    order
}

/// Whether every vertex's earlier neighbours form a complete set.
pub(crate) fn is_perfect(adj: &[Vec<usize>], order: &[usize]) -> bool {
    let mut pos = vec![usize::MAX; adj.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order.iter().all(|&v| {
        let earlier: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] < pos[v]).collect();
        let Some(&last) = earlier.iter().max_by_key(|&&w| pos[w]) else {
            return true;
        };
        earlier
            .iter()
            .all(|&x| x == last || adj[last].binary_search(&x).is_ok())
    })
}

/// Perfect ordering of a chordal graph, honouring `discrete` when given.
pub(crate) fn perfect_order(adj: &[Vec<usize>], discrete: Option<&[bool]>) -> Option<Vec<usize>> {
    let order = mcs_order(adj, discrete, None);
    is_perfect(adj, &order).then_some(order)
}

/// Cliques in perfect-sequence order with their separators (0-based, sorted).
#[derive(Clone, Debug)]
pub(crate) struct CliqueSeq {
    pub cliques: Vec<Vec<usize>>,
    pub separators: Vec<Vec<usize>>,
}

/// Cliques from a perfect ordering. Ladder sets `{v} ∪ earlier(v)` that
/// grow by one vertex at a time form chains; each chain ends in a maximal
/// clique, listed by the position where its chain starts. Isolated vertices
/// come first.
pub(crate) fn clique_seq(adj: &[Vec<usize>], order: &[usize]) -> CliqueSeq {
    let p = adj.len();
    let mut pos = vec![0; p];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut earlier: Vec<Vec<usize>> = Vec::with_capacity(p);
    let mut parent = vec![None; p];
    for (i, &v) in order.iter().enumerate() {
        let e: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] < i).collect();
        parent[i] = e.iter().map(|&w| pos[w]).max();
        earlier.push(e);
    }
    let mut extension: Vec<Option<usize>> = vec![None; p];
    let mut starts = vec![true; p];
    for j in 0..p {
        if let Some(i) = parent[j] {
            if extension[i].is_none() && earlier[j].len() == earlier[i].len() + 1 {
                extension[i] = Some(j);
                starts[j] = false;
            }
        }
    }
    let mut isolated = Vec::new();
    let mut rest = Vec::new();
    for s in (0..p).filter(|&s| starts[s]) {
        let mut end = s;
        while let Some(j) = extension[end] {
            end = j;
        }
        let v = order[end];
        let mut c = earlier[end].clone();
        c.push(v);
        c.sort_unstable();
        if adj[v].is_empty() {
            isolated.push(c);
        } else {
            rest.push(c);
        }
    }
    isolated.append(&mut rest);
    let cliques = isolated;
    let mut in_hist = vec![false; p];
    let separators = cliques
        .iter()
        .map(|c| {
            let s: Vec<usize> = c.iter().copied().filter(|&v| in_hist[v]).collect();
            for &v in c {
                in_hist[v] = true;
            }
            s
        })
        .collect();
    CliqueSeq { cliques, separators }
}

fn is_subset_sorted(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Junction forest links `(parent, child)`: each clique with a non-empty
/// separator joins the earliest preceding clique that contains it.
pub(crate) fn junction_links(seq: &CliqueSeq, p: usize) -> Vec<(usize, usize)> {
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); p];
    for (i, c) in seq.cliques.iter().enumerate() {
        for &v in c {
            containing[v].push(i);
        }
    }
    let mut links = Vec::new();
    for (j, s) in seq.separators.iter().enumerate() {
        let Some(&pivot) = s.iter().min_by_key(|&&v| containing[v].len()) else {
            continue;
        };
        let parent = containing[pivot]
            .iter()
            .copied()
            .take_while(|&i| i < j)
            .find(|&i| is_subset_sorted(s, &seq.cliques[i]))
            .expect("running intersection");
        links.push((parent, j));
    }
    links
}

/// Tracks continuous components and their discrete boundaries, to decide
/// whether adding an edge would open a forbidden path.
pub(crate) struct MixedState<'a> {
    adj: &'a [Vec<usize>],
    discrete: &'a [bool],
    comp: Vec<usize>,
    boundary: Vec<Vec<usize>>,
}

impl<'a> MixedState<'a> {
    pub(crate) fn new(adj: &'a [Vec<usize>], discrete: &'a [bool]) -> Self {
        let p = adj.len();
        let mut comp = vec![usize::MAX; p];
        let mut boundary = Vec::new();
        for s in 0..p {
            if discrete[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = boundary.len();
            let mut b = BTreeSet::new();
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &w in &adj[x] {
                    if discrete[w] {
                        b.insert(w);
                    } else if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            boundary.push(b.into_iter().collect());
        }
        Self { adj, discrete, comp, boundary }
    }

    fn complete(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &a)| {
            set[i + 1..].iter().all(|&b| self.adj[a].binary_search(&b).is_ok())
        })
    }

    /// True when the graph with `(u, v)` added has no forbidden path,
    /// assuming the current graph has none.
    pub(crate) fn allows(&self, u: usize, v: usize) -> bool {
        match (self.discrete[u], self.discrete[v]) {
            (true, true) => true,
            (false, true) | (true, false) => {
                let (c, d) = if self.discrete[u] { (v, u) } else { (u, v) };
                self.boundary[self.comp[c]]
                    .iter()
                    .all(|&b| b == d || self.adj[d].binary_search(&b).is_ok())
            }
            (false, false) => {
                let (a, b) = (self.comp[u], self.comp[v]);
                if a == b {
                    return true;
                }
                let mut set: Vec<usize> = self.boundary[a].iter().chain(&self.boundary[b]).copied().collect();
                set.sort_unstable();
                set.dedup();
                self.complete(&set)
            }
        }
    }

    /// True when every continuous component has a complete discrete boundary.
    pub(crate) fn is_clean(&self) -> bool {
        self.boundary.iter().all(|b| self.complete(b))
    }
}

/// For a non-edge `(u, v)` of a chordal graph, returns `N(u) ∩ N(v)` when
/// that set separates `u` from `v`, which is exactly when adding the edge
/// keeps the graph chordal. Returns `None` for edges and ineligible pairs.
pub(crate) fn eligible_separator(adj: &[Vec<usize>], u: usize, v: usize) -> Option<Vec<usize>> {
    if u == v || adj[u].binary_search(&v).is_ok() {
        return None;
    }
    let sep: Vec<usize> = adj[u].iter().copied().filter(|w| adj[v].binary_search(w).is_ok()).collect();
    let mut seen = vec![false; adj.len()];
    for &s in &sep {
        seen[s] = true;
    }
    seen[u] = true;
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for &w in &adj[x] {
            if w == v {
                return None;
            }
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Some(sep)
}

/// An add-eligible pair `(u, v)`, `u < v`, with `sep = N(u) ∩ N(v)` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Candidate {
    pub u: usize,
    pub v: usize,
    pub sep: Vec<usize>,
}

/// Non-edges whose addition keeps a chordal graph chordal, found from the
/// junction forest. Pairs in different components are included only when
/// `cross` is set. The result is sorted by `(u, v)`.
pub(crate) fn eligible_pairs(adj: &[Vec<usize>], seq: &CliqueSeq, cross: bool) -> Vec<Candidate> {
    let p = adj.len();
    let links = junction_links(seq, p);
    let k = seq.cliques.len();
    let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in &links {
        tree_adj[a].push(b);
        tree_adj[b].push(a);
    }
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); p];
    for (i, c) in seq.cliques.iter().enumerate() {
        for &v in c {
            containing[v].push(i);
        }
    }
    let sep_of = |a: usize, b: usize| &seq.separators[a.max(b)];

    let mut distinct: Vec<&Vec<usize>> = links.iter().map(|&(_, j)| &seq.separators[j]).collect();
    distinct.sort();
    distinct.dedup();

    let mut out = Vec::new();
    for s in distinct {
        let pivot = *s.iter().min_by_key(|&&v| containing[v].len()).expect("non-empty separator");
        let members: Vec<usize> = containing[pivot]
            .iter()
            .copied()
            .filter(|&i| is_subset_sorted(s, &seq.cliques[i]))
            .collect();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(l, &i)| (i, l)).collect();
        let mut uf = UnionFind::new(members.len());
        for (l, &i) in members.iter().enumerate() {
            for &n in &tree_adj[i] {
                if let Some(&ln) = local.get(&n) {
                    if sep_of(i, n) != s {
                        uf.union(l, ln);
                    }
                }
            }
        }
        let mut parts: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        for (l, &i) in members.iter().enumerate() {
            let root = uf.find(l);
            let part = parts.entry(root).or_default();
            part.extend(seq.cliques[i].iter().copied().filter(|v| s.binary_search(v).is_err()));
        }
        let mut parts: Vec<Vec<usize>> = parts.into_values().map(|b| b.into_iter().collect()).collect();
        parts.sort();
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                for &x in &parts[a] {
                    for &y in &parts[b] {
                        out.push(Candidate { u: x.min(y), v: x.max(y), sep: s.clone() });
                    }
                }
            }
        }
    }
    if cross {
        let comp = components(adj);
        for u in 0..p {
            for v in u + 1..p {
                if comp[u] != comp[v] {
                    out.push(Candidate { u, v, sep: Vec::new() });
                }
            }
        }
    }
    out.sort_by_key(|c| (c.u, c.v));
    out.dedup_by_key(|c| (c.u, c.v));
    out
}

fn discrete_mask(g: &GraphModel) -> Vec<bool> {
    g.num_cat().iter().map(|&k| k > 0).collect()
}

/// Maximum cardinality search over `g` returning a 1-based perfect numbering,
/// or `None` when the graph is not triangulated (or, with `discrete_first`,
/// not strongly decomposable).
pub fn mcs(g: &GraphModel, root: Option<usize>, discrete_first: bool) -> Result<Option<Vec<usize>>> {
    let root = root.map(|r| g.check_vertex(r)).transpose()?;
    let mask = discrete_first.then(|| discrete_mask(g));
    let adj = g.adjacency();
    let order = mcs_order(adj, mask.as_deref(), root);
    let ok = is_perfect(adj, &order)
        && mask.as_deref().is_none_or(|d| {
            let first_cont = order.iter().position(|&v| !d[v]).unwrap_or(order.len());
            order[first_cont..].iter().all(|&v| !d[v])
        });
    Ok(ok.then(|| order.into_iter().map(|v| v + 1).collect()))
}

/// Whether `order` (1-based, a permutation of the vertices) is a perfect numbering.
pub fn is_perfect_numbering(g: &GraphModel, order: &[usize]) -> Result<bool> {
    let mut seen = vec![false; g.p()];
    let mut zero = Vec::with_capacity(order.len());
    for &v in order {
        let i = g.check_vertex(v)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!("vertex {v} numbered twice")));
        }
        zero.push(i);
    }
    if zero.len() != g.p() {
        return Err(Error::InvalidArgument("numbering must cover every vertex".into()));
    }
    Ok(is_perfect(g.adjacency(), &zero))
}

pub fn is_triangulated(g: &GraphModel) -> bool {
    perfect_order(g.adjacency(), None).is_some()
}

/// Triangulated with no forbidden path between discrete vertices.
pub fn is_strongly_decomposable(g: &GraphModel) -> bool {
    let mask = discrete_mask(g);
    perfect_order(g.adjacency(), Some(&mask)).is_some()
}

/// Whether some path joins two non-adjacent discrete vertices through
/// continuous vertices only.
pub fn has_forbidden_path(g: &GraphModel) -> bool {
    let mask = discrete_mask(g);
    !MixedState::new(g.adjacency(), &mask).is_clean()
}

/// A perfect sequence of cliques (1-based vertices, each set ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectSequence {
    pub cliques: Vec<Vec<usize>>,
    pub histories: Vec<Vec<usize>>,
    /// `separators[0]` and those of clique heads of new components are empty.
    pub separators: Vec<Vec<usize>>,
    pub residuals: Vec<Vec<usize>>,
}

impl PerfectSequence {
    fn from_seq(seq: &CliqueSeq) -> Self {
        let one = |s: &Vec<usize>| s.iter().map(|&v| v + 1).collect::<Vec<_>>();
        let mut hist = BTreeSet::new();
        let mut histories = Vec::new();
        let mut residuals = Vec::new();
        for (c, s) in seq.cliques.iter().zip(&seq.separators) {
            hist.extend(c.iter().map(|&v| v + 1));
            histories.push(hist.iter().copied().collect());
            residuals.push(c.iter().filter(|v| s.binary_search(v).is_err()).map(|&v| v + 1).collect());
        }
        Self {
            cliques: seq.cliques.iter().map(one).collect(),
            separators: seq.separators.iter().map(one).collect(),
            histories,
            residuals,
        }
    }

    /// Distinct non-empty separators with their multiplicities, ordered by
    /// first appearance.
    pub fn multiplicities(&self) -> Vec<(Vec<usize>, usize)> {
        let mut out: Vec<(Vec<usize>, usize)> = Vec::new();
        for s in self.separators.iter().filter(|s| !s.is_empty()) {
            match out.iter_mut().find(|(t, _)| t == s) {
                Some((_, n)) => *n += 1,
                None => out.push((s.clone(), 1)),
            }
        }
        out
    }
}

impl Serialize for PerfectSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let seps: Vec<Option<&Vec<usize>>> =
            self.separators.iter().map(|x| (!x.is_empty()).then_some(x)).collect();
        let mut st = s.serialize_struct("PerfectSequence", 4)?;
        st.serialize_field("cliques", &self.cliques)?;
        st.serialize_field("histories", &self.histories)?;
        st.serialize_field("separators", &seps)?;
        st.serialize_field("residuals", &self.residuals)?;
        st.end()
    }
}

/// Perfect sequence of `g`, or `None` when `g` is not triangulated (or not
/// strongly decomposable when `mixed_check` is set, in which case discrete
/// vertices lead the ordering).
pub fn perf_sets(g: &GraphModel, mixed_check: bool) -> Result<Option<PerfectSequence>> {
    let mask = mixed_check.then(|| discrete_mask(g));
    let adj = g.adjacency();
    Ok(perfect_order(adj, mask.as_deref()).map(|order| PerfectSequence::from_seq(&clique_seq(adj, &order))))
}

/// Junction forest over the cliques of a triangulated graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JunctionTree {
    /// Cliques (1-based vertices) in perfect-sequence order.
    pub nodes: Vec<Vec<usize>>,
    /// Pairs of 0-based indices into `nodes`, parent first.
    pub tree_edges: Vec<(usize, usize)>,
    /// Separator of each tree edge (1-based vertices).
    pub edge_separators: Vec<Vec<usize>>,
}

pub fn j_tree(g: &GraphModel) -> Result<JunctionTree> {
    let adj = g.adjacency();
    let order = perfect_order(adj, None).ok_or(Error::NotDecomposable)?;
    let seq = clique_seq(adj, &order);
    let links = junction_links(&seq, g.p());
    let one = |s: &Vec<usize>| s.iter().map(|&v| v + 1).collect::<Vec<_>>();
    Ok(JunctionTree {
        nodes: seq.cliques.iter().map(one).collect(),
        edge_separators: links.iter().map(|&(_, j)| one(&seq.separators[j])).collect(),
        tree_edges: links,
    })
}

/// Non-edges whose addition keeps `g` triangulated, including every pair in
/// different components. With `mixed`, edges that would open a forbidden
/// path are left out.
pub fn find_ed(g: &GraphModel, mixed: bool) -> Result<Vec<Edge>> {
    let adj = g.adjacency();
    let mask = discrete_mask(g);
    let order = if mixed {
        perfect_order(adj, Some(&mask)).ok_or(Error::NotStronglyDecomposable)?
    } else {
        perfect_order(adj, None).ok_or(Error::NotDecomposable)?
    };
    let seq = clique_seq(adj, &order);
    let cands = eligible_pairs(adj, &seq, true);
    let state = mixed.then(|| MixedState::new(adj, &mask));
    Ok(cands
        .into_iter()
        .filter(|c| state.as_ref().is_none_or(|s| s.allows(c.u, c.v)))
        .map(|c| Edge::from_zero(c.u, c.v))
        .collect())
}
