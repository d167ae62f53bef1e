//! Random graph models: Erdős–Rényi, Watts–Strogatz and Barabási–Albert.
//!
//! Each function draws `count` graphs from one ChaCha stream seeded by `seed`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `G(n, p)`: every pair present independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, count: usize, seed: u64) -> Result<Vec<Graph>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = Graph::empty(n, false)?;
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(p) {
                        g.add_edge(i, j)?;
                    }
                }
            }
            Ok(g)
        })
        .collect()
}

/// Ring lattice joining each node to its `k` nearest neighbours, then each
/// lattice edge `(u, u + j)` is rewired with probability `beta` to `(u, w)`
/// for a uniform `w` that is neither `u` nor already adjacent to `u`.
///
/// Plain variant: connectivity is not enforced. Rewiring keeps `n·k/2` edges.
pub fn gen_watts_strogatz(n: usize, k: usize, beta: f64, count: usize, seed: u64) -> Result<Vec<Graph>> {
    if k < 2 || !k.is_multiple_of(2) || k >= n {
        return Err(Error::InvalidConfig(format!("Watts-Strogatz needs an even k with 2 <= k < n, got k={k}, n={n}")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidConfig(format!("rewiring probability {beta} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = Graph::empty(n, false)?;
            for j in 1..=k / 2 {
                for u in 0..n {
                    g.add_edge(u, (u + j) % n)?;
                }
            }
            for j in 1..=k / 2 {
                for u in 0..n {
                    if !rng.gen_bool(beta) || g.degree(u) >= n - 1 {
                        continue;
                    }
                    let choices: Vec<usize> = (0..n).filter(|&w| w != u && !g.has_edge(u, w)).collect();
                    let w = *choices.choose(&mut rng).expect("degree below n-1 leaves a free target");
                    g.remove_edge(u, (u + j) % n)?;
                    g.add_edge(u, w)?;
                }
            }
            Ok(g)
        })
        .collect()
}

/// Grows `seed_graph` to `target_n` nodes; each new node attaches to `m`
/// distinct existing nodes chosen with probability proportional to degree.
pub fn gen_barabasi_albert(target_n: usize, m: usize, seed_graph: &Graph, count: usize, seed: u64) -> Result<Vec<Graph>> {
    let n0 = seed_graph.n();
    if m == 0 || m >= n0 {
        return Err(Error::InvalidConfig(format!("Barabási-Albert needs 1 <= m < seed nodes, got m={m}, seed nodes={n0}")));
    }
    if n0 > target_n {
        return Err(Error::InvalidConfig(format!("seed graph has {n0} nodes, more than the target {target_n}")));
    }
    let seed_graph = seed_graph.without_self_loops();
    let attachable = (0..n0).filter(|&v| seed_graph.degree(v) > 0).count();
    if attachable < m {
        return Err(Error::InvalidConfig(format!(
            "seed graph has {attachable} nodes with edges, fewer than m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = Graph::empty(target_n, false)?;
            let mut repeated = Vec::new();
            for (i, j) in seed_graph.edges() {
                g.add_edge(i, j)?;
                repeated.push(i);
                repeated.push(j);
            }
            for source in n0..target_n {
                let mut targets: Vec<usize> = Vec::with_capacity(m);
                while targets.len() < m {
                    let x = *repeated.choose(&mut rng).expect("seed has edges");
                    if !targets.contains(&x) {
                        targets.push(x);
                    }
                }
                for &t in &targets {
                    g.add_edge(source, t)?;
                    repeated.push(t);
                    repeated.push(source);
                }
            }
            Ok(g)
        })
        .collect()
}
