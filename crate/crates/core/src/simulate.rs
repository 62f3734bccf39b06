//! Seeded multivariate normal data with a known decomposable structure.
//!
//! Samples come from a linear recursive system over a perfect ordering:
//! each variable is a weighted sum of its earlier neighbours plus unit
//! normal noise. Earlier neighbours always form a complete set, so the
//! precision matrix has zeros exactly where the generating graph has none.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Edge, GraphModel};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SimModel {
    /// No edges: identity covariance.
    Independent,
    /// Path 1–2–…–p with correlation `rho` between neighbours.
    Chain { rho: f64 },
    /// Random recursive tree with correlation `rho` along each edge.
    Forest { rho: f64 },
    /// Random chordal graph; each vertex attaches to part of an earlier clique.
    RandomChordal,
}

pub struct Simulation {
    pub data: Dataset,
    pub graph: GraphModel,
    /// `parents[i]`: earlier neighbours of vertex `i` (0-based) with weights.
    parents: Parents,
    noise: Vec<f64>,
}

impl Simulation {
    /// Covariance matrix implied by the generating system.
    pub fn implied_covariance(&self) -> Vec<Vec<f64>> {
        let p = self.parents.len();
        let mut s = vec![vec![0.0; p]; p];
        for i in 0..p {
            for j in 0..i {
                let v: f64 = self.parents[i].iter().map(|&(k, b)| b * s[k][j]).sum();
                s[i][j] = v;
                s[j][i] = v;
            }
            s[i][i] = self.parents[i].iter().map(|&(k, b)| b * s[k][i]).sum::<f64>() + self.noise[i];
        }
        s
    }
}

type Parents = Vec<Vec<(usize, f64)>>;

fn structure(p: usize, model: SimModel, rng: &mut ChaCha8Rng) -> Result<(Parents, Vec<f64>)> {
    let mut parents = vec![Vec::new(); p];
    let mut noise = vec![1.0; p];
    match model {
        SimModel::Independent => {}
        SimModel::Chain { rho } | SimModel::Forest { rho } => {
            if !(rho.abs() < 1.0) {
                return Err(Error::InvalidArgument(format!("correlation {rho} must lie in (-1, 1)")));
            }
            for i in 1..p {
                let parent = match model {
                    SimModel::Chain { .. } => i - 1,
                    _ => rng.random_range(0..i),
                };
                parents[i].push((parent, rho));
                noise[i] = 1.0 - rho * rho;
            }
        }
        SimModel::RandomChordal => {
            for i in 1..p {
                let anchor = rng.random_range(0..i);
                let mut set: Vec<usize> = vec![anchor];
                let clique: Vec<usize> = parents[anchor].iter().map(|&(k, _)| k).collect();
                set.extend(clique.into_iter().filter(|_| rng.random_bool(0.5)));
                set.sort_unstable();
                let scale = 1.0 / set.len() as f64;
                parents[i] = set
                    .into_iter()
                    .map(|k| {
                        let mag: f64 = rng.random_range(0.3..0.8);
                        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                        (k, sign * mag * scale)
                    })
                    .collect();
            }
        }
    }
    Ok((parents, noise))
}

/// Draws `n` rows over `p` variables from `model` with the given seed.
pub fn simulate_mvn(p: usize, n: usize, model: SimModel, seed: u64) -> Result<Simulation> {
    if p == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!("need p >= 1 and n >= 2, got p = {p}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (parents, noise) = structure(p, model, &mut rng)?;
    let sd: Vec<f64> = noise.iter().map(|v| v.sqrt()).collect();
    let mut cols = vec![vec![0.0; n]; p];
    for r in 0..n {
        for i in 0..p {
            let z: f64 = rng.sample(StandardNormal);
            let mean: f64 = parents[i].iter().map(|&(k, b)| b * cols[k][r]).sum();
            cols[i][r] = mean + sd[i] * z;
        }
    }
    let edges: Vec<Edge> = parents
        .iter()
        .enumerate()
        .flat_map(|(i, ps)| ps.iter().map(move |&(k, _)| Edge::from_zero(k, i)))
        .collect();
    let data = Dataset::from_continuous(cols)?;
    let graph = GraphModel::new(p, edges, vec![0; p], true)?.with_vert_names(data.names().to_vec())?;
    Ok(Simulation { data, graph, parents, noise })
}
