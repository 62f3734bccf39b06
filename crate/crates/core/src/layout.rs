//! Force-directed vertex placement in the unit square.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::GraphModel;
use crate::parallel;

/// Fruchterman-Reingold placement.
///
/// Starts from `initial` when given, otherwise from a seeded uniform
/// placement, and runs `num_iter` iterations with linear cooling. With
/// `num_iter = 0` the starting coordinates are returned unchanged. Every
/// coordinate stays within `[0, 1]`.
pub fn layout_fr(g: &GraphModel, num_iter: usize, seed: u64, initial: Option<&[(f64, f64)]>) -> Result<Vec<(f64, f64)>> {
    let p = g.p();
    if let Some(init) = initial {
        if init.len() != p {
            return Err(Error::InvalidArgument(format!("{} coordinates for {p} vertices", init.len())));
        }
        if init.iter().any(|&(x, y)| !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y)) {
            return Err(Error::InvalidArgument("coordinates must lie in the unit square".into()));
        }
        if num_iter == 0 {
            return Ok(init.to_vec());
        }
    }
    if p == 1 {
        return Ok(vec![(0.5, 0.5)]);
    }
    let mut pos: Vec<(f64, f64)> = match initial {
        Some(init) => init.to_vec(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..p).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect()
        }
    };
    let k = (1.0 / p.max(1) as f64).sqrt();
    let t0 = 0.1;
    let adj = g.adjacency();
    for it in 0..num_iter {
        let t = t0 * (1.0 - it as f64 / num_iter as f64);
        let cur = &pos;
        let disp = parallel::map_range(p, |v| {
            let (mut dx, mut dy) = (0.0, 0.0);
            for u in 0..p {
                if u == v {
                    continue;
                }
                let (ex, ey) = (cur[v].0 - cur[u].0, cur[v].1 - cur[u].1);
                let d = (ex * ex + ey * ey).sqrt().max(1e-9);
                let f = k * k / d;
                dx += ex / d * f;
                dy += ey / d * f;
            }
            for &u in &adj[v] {
                let (ex, ey) = (cur[v].0 - cur[u].0, cur[v].1 - cur[u].1);
                let d = (ex * ex + ey * ey).sqrt().max(1e-9);
                let f = d * d / k;
                dx -= ex / d * f;
                dy -= ey / d * f;
            }
            (dx, dy)
        });
        for (p, (dx, dy)) in pos.iter_mut().zip(disp) {
            let len = (dx * dx + dy * dy).sqrt();
            if len > 0.0 {
                let step = len.min(t);
                p.0 = (p.0 + dx / len * step).clamp(0.0, 1.0);
                p.1 = (p.1 + dy / len * step).clamp(0.0, 1.0);
            }
        }
    }
    Ok(pos)
}
