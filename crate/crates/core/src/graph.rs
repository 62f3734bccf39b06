//! Undirected graph models: the edge list with vertex metadata and search
//! provenance, plus the basic traversal queries over it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::parallel;

/// An undirected edge between two 1-based vertices, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Builds the canonical edge between `a` and `b` (in either order).
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::VertexOutOfRange { vertex: 0, p: 0 });
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Self {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub(crate) fn from_zero(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        Self {
            u: a.min(b) + 1,
            v: a.max(b) + 1,
        }
    }

    pub(crate) fn zero(self) -> (usize, usize) {
        (self.u - 1, self.v - 1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.u, self.v].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[usize; 2]>::deserialize(d)?;
        Edge::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// Label of the measure a search minimised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "LR")]
    Lr,
    #[serde(rename = "AIC")]
    Aic,
    #[serde(rename = "BIC")]
    Bic,
    #[serde(rename = "USER")]
    User,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Lr => "LR",
            MeasureKind::Aic => "AIC",
            MeasureKind::Bic => "BIC",
            MeasureKind::User => "USER",
        })
    }
}

/// Variable composition of a model, derived from the level counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Continuous,
    Discrete,
    Mixed,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Continuous => "continuous",
            ModelKind::Discrete => "discrete",
            ModelKind::Mixed => "mixed",
        })
    }
}

/// An undirected graphical model.
///
/// Edges are kept in insertion order. `stat_seq` and `num_p` are aligned
/// with the edge list and record, for searched edges, the statistic that
/// justified the edge and its number of free parameters. `range_forest` and
/// `range_stepw` are 1-based inclusive index ranges into the edge list.
#[derive(Clone, Debug)]
pub struct GraphModel {
    p: usize,
    edges: Vec<Edge>,
    num_cat: Vec<u32>,
    homog: bool,
    vert_names: Vec<String>,
    stat_forest: Option<MeasureKind>,
    stat_stepw: Option<MeasureKind>,
    stat_user: Option<String>,
    stat_seq: Vec<f64>,
    num_p: Vec<f64>,
    range_forest: Option<(usize, usize)>,
    range_stepw: Option<(usize, usize)>,
    adjacency: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for GraphModel {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.edges == other.edges
            && self.num_cat == other.num_cat
            && self.homog == other.homog
            && self.vert_names == other.vert_names
            && self.stat_forest == other.stat_forest
            && self.stat_stepw == other.stat_stepw
            && self.stat_user == other.stat_user
            && self.stat_seq == other.stat_seq
            && self.num_p == other.num_p
            && self.range_forest == other.range_forest
            && self.range_stepw == other.range_stepw
    }
}

fn default_names(p: usize) -> Vec<String> {
    (1..=p).map(|i| i.to_string()).collect()
}

impl GraphModel {
    /// The model with `p` continuous vertices and no edges.
    pub fn empty(p: usize) -> Self {
        Self {
            p,
            edges: Vec::new(),
            num_cat: vec![0; p],
            homog: true,
            vert_names: default_names(p),
            stat_forest: None,
            stat_stepw: None,
            stat_user: None,
            stat_seq: Vec::new(),
            num_p: Vec::new(),
            range_forest: None,
            range_stepw: None,
            adjacency: OnceLock::new(),
        }
    }

    /// Validated model with the given edges and level counts.
    pub fn new(p: usize, edges: Vec<Edge>, num_cat: Vec<u32>, homog: bool) -> Result<Self> {
        let m = edges.len();
        let g = Self {
            edges,
            num_cat,
            homog,
            stat_seq: vec![0.0; m],
            num_p: vec![0.0; m],
            ..Self::empty(p)
        };
        g.validate()?;
        Ok(g)
    }

    /// Continuous model from `(a, b)` vertex pairs.
    pub fn from_edges(p: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| Edge::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, edges, vec![0; p], true)
    }

    pub fn with_vert_names(mut self, names: Vec<String>) -> Result<Self> {
        self.vert_names = names;
        self.validate()?;
        Ok(self)
    }

    pub fn with_num_cat(mut self, num_cat: Vec<u32>) -> Result<Self> {
        self.num_cat = num_cat;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let p = self.p;
        if self.num_cat.len() != p {
            return Err(Error::InvalidModel(format!(
                "numCat has length {} for p = {p}",
                self.num_cat.len()
            )));
        }
        if self.vert_names.len() != p {
            return Err(Error::InvalidModel(format!(
                "vertNames has length {} for p = {p}",
                self.vert_names.len()
            )));
        }
        if let Some(&k) = self.num_cat.iter().find(|&&k| k == 1) {
            return Err(Error::InvalidModel(format!("level count {k} is not allowed")));
        }
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        for e in &self.edges {
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if e.u > e.v {
                return Err(Error::InvalidModel(format!("edge {e} is not canonical")));
            }
            if e.v > p || e.u == 0 {
                return Err(Error::VertexOutOfRange { vertex: e.v.max(e.u), p });
            }
            if !seen.insert(*e) {
                return Err(Error::DuplicateEdge(e.u, e.v));
            }
        }
        let m = self.edges.len();
        if self.stat_seq.len() != m || self.num_p.len() != m {
            return Err(Error::InvalidModel(
                "statSeq and numP must be aligned with edges".into(),
            ));
        }
        let check_range = |r: Option<(usize, usize)>, name: &str| -> Result<()> {
            if let Some((a, b)) = r {
                if a == 0 || a > b || b > m {
                    return Err(Error::InvalidModel(format!(
                        "{name} range {a}...{b} is invalid for {m} edges"
                    )));
                }
            }
            Ok(())
        };
        check_range(self.range_forest, "minForest")?;
        check_range(self.range_stepw, "stepw")?;
        if let (Some((_, fb)), Some((sa, _))) = (self.range_forest, self.range_stepw) {
            if sa <= fb {
                return Err(Error::InvalidModel(
                    "minForest and stepw ranges overlap".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.p
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn num_cat(&self) -> &[u32] {
        &self.num_cat
    }
    pub fn homog(&self) -> bool {
        self.homog
    }
    pub fn vert_names(&self) -> &[String] {
        &self.vert_names
    }
    pub fn stat_forest(&self) -> Option<MeasureKind> {
        self.stat_forest
    }
    pub fn stat_stepw(&self) -> Option<MeasureKind> {
        self.stat_stepw
    }
    pub fn stat_user(&self) -> Option<&str> {
        self.stat_user.as_deref()
    }
    pub fn stat_seq(&self) -> &[f64] {
        &self.stat_seq
    }
    pub fn num_p(&self) -> &[f64] {
        &self.num_p
    }
    pub fn range_forest(&self) -> Option<(usize, usize)> {
        self.range_forest
    }
    pub fn range_stepw(&self) -> Option<(usize, usize)> {
        self.range_stepw
    }

    pub fn kind(&self) -> ModelKind {
        let discrete = self.num_cat.iter().filter(|&&k| k > 0).count();
        match discrete {
            0 => ModelKind::Continuous,
            d if d == self.p => ModelKind::Discrete,
            _ => ModelKind::Mixed,
        }
    }

    /// Replaces the per-edge parameter counts.
    pub fn set_num_p(&mut self, num_p: Vec<f64>) -> Result<()> {
        if num_p.len() != self.edges.len() {
            return Err(Error::InvalidModel("numP must be aligned with edges".into()));
        }
        self.num_p = num_p;
        Ok(())
    }

    pub(crate) fn set_homog(&mut self, homog: bool) {
        self.homog = homog;
    }

    pub(crate) fn set_stat_user(&mut self, label: Option<String>) {
        self.stat_user = label;
    }

    pub(crate) fn push_edge(&mut self, e: Edge, stat: f64, num_p: f64) {
        self.edges.push(e);
        self.stat_seq.push(stat);
        self.num_p.push(num_p);
        self.adjacency = OnceLock::new();
    }

    pub(crate) fn set_forest_provenance(&mut self, kind: MeasureKind, range: Option<(usize, usize)>) {
        self.stat_forest = Some(kind);
        self.range_forest = range;
    }

    pub(crate) fn set_stepw_provenance(&mut self, kind: MeasureKind, range: Option<(usize, usize)>) {
        self.stat_stepw = Some(kind);
        self.range_stepw = range;
    }

    /// Sorted 0-based adjacency lists, built on first use.
    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        self.adjacency.get_or_init(|| build_adjacency(self.p, &self.edges))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.p {
            Err(Error::VertexOutOfRange { vertex: v, p: self.p })
        } else {
            Ok(v - 1)
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == 0 || b == 0 || a > self.p || b > self.p {
            return false;
        }
        self.adjacency()[a - 1].binary_search(&(b - 1)).is_ok()
    }

    /// Symmetric boolean adjacency matrix, row-major `p × p`.
    pub fn adj_matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.p]; self.p];
        for e in &self.edges {
            let (a, b) = e.zero();
            m[a][b] = true;
            m[b][a] = true;
        }
        m
    }

    /// Degree of each vertex in `vs`; an empty `vs` means every vertex.
    pub fn degree(&self, vs: &[usize]) -> Result<BTreeMap<usize, usize>> {
        let adj = self.adjacency();
        if vs.is_empty() {
            return Ok((0..self.p).map(|i| (i + 1, adj[i].len())).collect());
        }
        vs.iter()
            .map(|&v| Ok((v, adj[self.check_vertex(v)?].len())))
            .collect()
    }

    /// Adjacent vertices of `v`, ascending.
    pub fn neighbours(&self, v: usize) -> Result<Vec<usize>> {
        let i = self.check_vertex(v)?;
        Ok(self.adjacency()[i].iter().map(|&w| w + 1).collect())
    }

    /// Vertices reachable from `v`, including `v` itself, ascending.
    pub fn dfs_reachable(&self, v: usize) -> Result<Vec<usize>> {
        let start = self.check_vertex(v)?;
        let adj = self.adjacency();
        let mut seen = vec![false; self.p];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for &w in &adj[x] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok((0..self.p).filter(|&i| seen[i]).map(|i| i + 1).collect())
    }

    /// Unit-length shortest path distances from `v`; `None` when unreachable.
    pub fn short_path(&self, v: usize) -> Result<Vec<Option<usize>>> {
        let start = self.check_vertex(v)?;
        Ok(bfs_distances(self.adjacency(), start))
    }

    /// All-pairs distances, one BFS per vertex.
    pub fn short_path_all(&self) -> Vec<Vec<Option<usize>>> {
        let adj = self.adjacency();
        parallel::map_range(self.p, |s| bfs_distances(adj, s))
    }

    /// Vertices within `radius` steps of `v` as `(vertex, distance)`, ordered
    /// by distance then vertex. `v` itself comes first with distance 0.
    pub fn neighbourhood(&self, v: usize, radius: usize) -> Result<Vec<(usize, usize)>> {
        let mut out: Vec<(usize, usize)> = self
            .short_path(v)?
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| d.filter(|&d| d <= radius).map(|d| (i + 1, d)))
            .collect();
        out.sort_by_key(|&(w, d)| (d, w));
        Ok(out)
    }

    /// Component id per vertex, numbered 1..k in order of smallest member.
    pub fn connected_components(&self) -> Vec<usize> {
        components(self.adjacency()).iter().map(|&c| c + 1).collect()
    }

    pub fn num_components(&self) -> usize {
        components(self.adjacency()).iter().max().map_or(0, |&c| c + 1)
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.num_components() == self.p
    }

    /// Induced subgraph on `vs`, renumbered 1..|vs| in the given order.
    pub fn subgraph(&self, vs: &[usize]) -> Result<GraphModel> {
        let mut map = vec![usize::MAX; self.p];
        for (new, &v) in vs.iter().enumerate() {
            let i = self.check_vertex(v)?;
            if map[i] != usize::MAX {
                return Err(Error::InvalidArgument(format!("vertex {v} listed twice")));
            }
            map[i] = new;
        }
        let mut sub = GraphModel {
            num_cat: vs.iter().map(|&v| self.num_cat[v - 1]).collect(),
            vert_names: vs.iter().map(|&v| self.vert_names[v - 1].clone()).collect(),
            homog: self.homog,
            stat_forest: self.stat_forest,
            stat_stepw: self.stat_stepw,
            stat_user: self.stat_user.clone(),
            ..GraphModel::empty(vs.len())
        };
        let (mut in_forest, mut in_stepw) = (0usize, 0usize);
        for (idx, e) in self.edges.iter().enumerate() {
            let (a, b) = e.zero();
            if map[a] == usize::MAX || map[b] == usize::MAX {
                continue;
            }
            sub.edges.push(Edge::from_zero(map[a], map[b]));
            sub.stat_seq.push(self.stat_seq[idx]);
            sub.num_p.push(self.num_p[idx]);
            let pos = idx + 1;
            if self.range_forest.is_some_and(|(f, l)| (f..=l).contains(&pos)) {
                in_forest += 1;
            }
            if self.range_stepw.is_some_and(|(f, l)| (f..=l).contains(&pos)) {
                in_stepw += 1;
            }
        }
        sub.range_forest = (in_forest > 0).then_some((1, in_forest));
        sub.range_stepw = (in_stepw > 0).then_some((in_forest + 1, in_forest + in_stepw));
        if self.range_forest.is_some() && in_forest == 0 {
            sub.range_forest = None;
        }
        Ok(sub)
    }

    /// Structural report in the layout used by the CLI.
    pub fn summary(&self) -> Summary {
        Summary {
            edges: self.edges.len(),
            vertices: self.p,
            kind: self.kind(),
            stat_forest: self.stat_forest,
            stat_stepw: self.stat_stepw,
            range_forest: self.range_forest,
            range_stepw: self.range_stepw,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub(crate) fn build_adjacency(p: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); p];
    for e in edges {
        let (a, b) = e.zero();
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

pub(crate) fn bfs_distances(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap_or(0);
        for &w in &adj[x] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// 0-based component ids, ordered by smallest member.
pub(crate) fn components(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut comp = vec![usize::MAX; adj.len()];
    let mut next = 0;
    for s in 0..adj.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &w in &adj[x] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Printable structural summary of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub edges: usize,
    pub vertices: usize,
    pub kind: ModelKind,
    pub stat_forest: Option<MeasureKind>,
    pub stat_stepw: Option<MeasureKind>,
    pub range_forest: Option<(usize, usize)>,
    pub range_stepw: Option<(usize, usize)>,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Graphical model")?;
        writeln!(f, "Number of edges       = {}", self.edges)?;
        writeln!(f, "Number of vertices    = {}", self.vertices)?;
        writeln!(f, "Model                 = {}", self.kind)?;
        if let Some(s) = self.stat_forest {
            writeln!(f, "Statistic (minForest) = {s}")?;
        }
        if let Some(s) = self.stat_stepw {
            writeln!(f, "Statistic (stepw)     = {s}")?;
        }
        if let Some((a, b)) = self.range_forest {
            writeln!(f, "Edges from minForest  = {a}...{b}")?;
        }
        if let Some((a, b)) = self.range_stepw {
            writeln!(f, "Edges from stepw      = {a}...{b}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GraphModelJson {
    p: usize,
    #[serde(default)]
    num_cat: Option<Vec<u32>>,
    #[serde(default = "default_homog")]
    homog: bool,
    #[serde(default)]
    vert_names: Option<Vec<String>>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default)]
    stat_seq: Option<Vec<f64>>,
    #[serde(default)]
    num_p: Option<Vec<f64>>,
    #[serde(default)]
    stat_forest: Option<MeasureKind>,
    #[serde(default)]
    stat_stepw: Option<MeasureKind>,
    #[serde(default)]
    stat_user: Option<String>,
    #[serde(default)]
    range_forest: Option<(usize, usize)>,
    #[serde(default)]
    range_stepw: Option<(usize, usize)>,
}

fn default_homog() -> bool {
    true
}

impl Serialize for GraphModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphModelJson {
            p: self.p,
            num_cat: Some(self.num_cat.clone()),
            homog: self.homog,
            vert_names: Some(self.vert_names.clone()),
            edges: self.edges.clone(),
            stat_seq: Some(self.stat_seq.clone()),
            num_p: Some(self.num_p.clone()),
            stat_forest: self.stat_forest,
            stat_stepw: self.stat_stepw,
            stat_user: self.stat_user.clone(),
            range_forest: self.range_forest,
            range_stepw: self.range_stepw,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphModelJson::deserialize(d)?;
        let m = j.edges.len();
        let g = GraphModel {
            p: j.p,
            num_cat: j.num_cat.unwrap_or_else(|| vec![0; j.p]),
            homog: j.homog,
            vert_names: j.vert_names.unwrap_or_else(|| default_names(j.p)),
            edges: j.edges,
            stat_seq: j.stat_seq.unwrap_or_else(|| vec![0.0; m]),
            num_p: j.num_p.unwrap_or_else(|| vec![0.0; m]),
            stat_forest: j.stat_forest,
            stat_stepw: j.stat_stepw,
            stat_user: j.stat_user,
            range_forest: j.range_forest,
            range_stepw: j.range_stepw,
            adjacency: OnceLock::new(),
        };
        g.validate().map_err(serde::de::Error::custom)?;
        Ok(g)
    }
}
