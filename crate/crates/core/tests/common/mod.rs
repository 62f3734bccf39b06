//! Brute-force oracles and random generators shared by the integration tests.
//! Nothing here calls into the chordal or search code under test.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use hdgm::{Column, Dataset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn adjacency(p: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; p]; p];
    for &(u, v) in edges {
        a[u - 1][v - 1] = true;
        a[v - 1][u - 1] = true;
    }
    a
}

pub fn edge_list(a: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let p = a.len();
    let mut out = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            if a[u][v] {
                out.push((u + 1, v + 1));
            }
        }
    }
    out
}

/// Random graph made chordal by eliminating vertices in random order and
/// adding the fill-in.
pub fn random_chordal(rng: &mut ChaCha8Rng, p: usize, density: f64) -> Vec<(usize, usize)> {
    let mut a = vec![vec![false; p]; p];
    for u in 0..p {
        for v in u + 1..p {
            if rng.random_bool(density) {
                a[u][v] = true;
                a[v][u] = true;
            }
        }
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(rng);
    let mut gone = vec![false; p];
    for &x in &order {
        let nb: Vec<usize> = (0..p).filter(|&y| !gone[y] && a[x][y]).collect();
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                a[u][v] = true;
                a[v][u] = true;
            }
        }
        gone[x] = true;
    }
    edge_list(&a)
}

/// Chordality by repeatedly deleting simplicial vertices.
pub fn is_chordal(a: &[Vec<bool>]) -> bool {
    let p = a.len();
    let mut alive = vec![true; p];
    for _ in 0..p {
        let simplicial = (0..p).find(|&x| {
            alive[x] && {
                let nb: Vec<usize> = (0..p).filter(|&y| alive[y] && a[x][y]).collect();
                nb.iter().enumerate().all(|(i, &u)| nb[i + 1..].iter().all(|&v| a[u][v]))
            }
        });
        match simplicial {
            Some(x) => alive[x] = false,
            None => return false,
        }
    }
    true
}

/// A path between two non-adjacent discrete vertices whose interior is
/// entirely continuous.
pub fn has_forbidden_path(a: &[Vec<bool>], discrete: &[bool]) -> bool {
    let p = a.len();
    for s in (0..p).filter(|&s| discrete[s]) {
        let mut seen = vec![false; p];
        let mut stack: Vec<usize> = (0..p).filter(|&y| a[s][y] && !discrete[y]).collect();
        for &y in &stack {
            seen[y] = true;
        }
        while let Some(x) = stack.pop() {
            for y in 0..p {
                if !a[x][y] || seen[y] || y == s {
                    continue;
                }
                if discrete[y] {
                    if !a[s][y] {
                        return true;
                    }
                } else {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    false
}

/// Every non-edge whose addition keeps the graph chordal and, when `discrete`
/// is given, free of forbidden paths.
pub fn eligible_edges(a: &[Vec<bool>], discrete: Option<&[bool]>) -> Vec<(usize, usize)> {
    let p = a.len();
    let mut out = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            if a[u][v] {
                continue;
            }
            let mut b = a.to_vec();
            b[u][v] = true;
            b[v][u] = true;
            if is_chordal(&b) && discrete.is_none_or(|d| !has_forbidden_path(&b, d)) {
                out.push((u + 1, v + 1));
            }
        }
    }
    out
}

/// Maximal cliques by subset enumeration (small p only).
pub fn maximal_cliques(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let p = a.len();
    let complete: Vec<u32> = (1u32..1 << p)
        .filter(|&m| {
            let vs: Vec<usize> = (0..p).filter(|&i| m >> i & 1 == 1).collect();
            vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| a[u][v]))
        })
        .collect();
    let mut out: Vec<Vec<usize>> = complete
        .iter()
        .filter(|&&m| !complete.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..p).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Separators of a junction tree: the intersections along a maximum-weight
/// spanning tree of the clique graph.
pub fn junction_separators(cliques: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let k = cliques.len();
    let mut pairs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let s: Vec<usize> = cliques[i].iter().copied().filter(|x| cliques[j].contains(x)).collect();
            pairs.push((i, j, s));
        }
    }
    pairs.sort_by_key(|x| std::cmp::Reverse(x.2.len()));
    let mut comp: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    for (i, j, s) in pairs {
        let (ci, cj) = (comp[i], comp[j]);
        if ci != cj {
            for c in comp.iter_mut() {
                if *c == cj {
                    *c = ci;
                }
            }
            if !s.is_empty() {
                out.push(s);
            }
        }
    }
    out
}

/// All spanning trees of the complete graph on `p` vertices.
pub fn spanning_trees(p: usize) -> Vec<Vec<(usize, usize)>> {
    if p < 2 {
        return vec![vec![]];
    }
    let all: Vec<(usize, usize)> = (1..=p).flat_map(|u| (u + 1..=p).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    choose(&all, 0, p - 1, &mut Vec::new(), &mut out, p);
    out
}

fn choose(
    all: &[(usize, usize)],
    from: usize,
    left: usize,
    pick: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
    p: usize,
) {
    if left == 0 {
        if acyclic(p, pick) {
            out.push(pick.clone());
        }
        return;
    }
    for i in from..all.len() {
        pick.push(all[i]);
        choose(all, i + 1, left - 1, pick, out, p);
        pick.pop();
    }
}

fn acyclic(p: usize, edges: &[(usize, usize)]) -> bool {
    let mut comp: Vec<usize> = (0..=p).collect();
    for &(u, v) in edges {
        let (a, b) = (comp[u], comp[v]);
        if a == b {
            return false;
        }
        for c in comp.iter_mut() {
            if *c == b {
                *c = a;
            }
        }
    }
    true
}

/// Continuous data with random correlations.
pub fn continuous_data(rng: &mut ChaCha8Rng, p: usize, n: usize) -> Dataset {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for j in 0..p {
        let w: Vec<f64> = (0..j).map(|_| rng.random_range(-0.8..0.8)).collect();
        let col: Vec<f64> = (0..n)
            .map(|r| {
                let z: f64 = rng.sample(StandardNormal);
                z + w.iter().enumerate().map(|(k, b)| b * cols[k][r]).sum::<f64>() / (j.max(1) as f64).sqrt()
            })
            .collect();
        cols.push(col);
    }
    Dataset::from_continuous(cols).unwrap()
}

/// Mixed data: `d` discrete columns (2 or 3 levels, all observed) followed by
/// continuous columns whose means depend on the discrete ones.
pub fn mixed_data(rng: &mut ChaCha8Rng, d: usize, c: usize, n: usize) -> Dataset {
    let mut codes: Vec<Vec<u32>> = Vec::new();
    for j in 0..d {
        let k: u32 = rng.random_range(2..=3);
        let col: Vec<u32> = (0..n)
            .map(|r| {
                let base = if r < k as usize { r as u32 } else { rng.random_range(0..k) };
                if j > 0 && r >= k as usize && rng.random_bool(0.5) {
                    codes[j - 1][r] % k
                } else {
                    base
                }
            })
            .collect();
        codes.push(col);
    }
    let mut conts: Vec<Vec<f64>> = Vec::new();
    for j in 0..c {
        let from_disc = if d > 0 && rng.random_bool(0.6) { Some(rng.random_range(0..d)) } else { None };
        let from_cont = if j > 0 && rng.random_bool(0.7) { Some(rng.random_range(0..j)) } else { None };
        let col: Vec<f64> = (0..n)
            .map(|r| {
                let z: f64 = rng.sample(StandardNormal);
                z + from_disc.map_or(0.0, |k| codes[k][r] as f64 * 0.8)
                    + from_cont.map_or(0.0, |k| 0.6 * conts[k][r])
            })
            .collect();
        conts.push(col);
    }
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for (j, col) in codes.into_iter().enumerate() {
        let k = *col.iter().max().unwrap() + 1;
        let one_based: Vec<u32> = col.iter().map(|x| x + 1).collect();
        names.push(format!("D{}", j + 1));
        columns.push(Column::from_codes(&one_based, k).unwrap());
    }
    for (j, col) in conts.into_iter().enumerate() {
        names.push(format!("X{}", j + 1));
        columns.push(Column::Continuous(col));
    }
    Dataset::new(names, columns).unwrap()
}

pub fn edge_set(g: &hdgm::GraphModel) -> BTreeSet<(usize, usize)> {
    g.edges().iter().map(|e| (e.u, e.v)).collect()
}
