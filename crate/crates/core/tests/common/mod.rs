#![allow(dead_code)]

use graphgames_core::search::{Policy, Sample};
use graphgames_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with p itself drawn uniformly, so sparse and dense graphs both show up.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> Graph {
    let p: f64 = rng.gen();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Every simple graph on `n` nodes, by edge-subset bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
        Graph::from_edges(n, edges).unwrap()
    })
}

/// Largest per-parameter relative gap between analytic and central-difference gradients.
pub fn gradient_gap(policy: &Policy, batch: &[Sample<'_>]) -> f64 {
    const H: f64 = 1e-5;
    let (_, grads) = policy.loss_and_gradients(batch);
    let rel = |a: f64, f: f64| (a - f).abs() / a.abs().max(f.abs()).max(1e-6);
    let mut worst = 0.0f64;
    let mut probe = policy.clone();
    for l in 0..policy.layers().len() {
        for k in 0..policy.layers()[l].weights.len() {
            let w = policy.layers()[l].weights[k];
            probe.layers_mut()[l].weights[k] = w + H;
            let up = probe.loss(batch);
            probe.layers_mut()[l].weights[k] = w - H;
            let down = probe.loss(batch);
            probe.layers_mut()[l].weights[k] = w;
            worst = worst.max(rel(grads.weights[l][k], (up - down) / (2.0 * H)));
        }
        for k in 0..policy.layers()[l].bias.len() {
            let b = policy.layers()[l].bias[k];
            probe.layers_mut()[l].bias[k] = b + H;
            let up = probe.loss(batch);
            probe.layers_mut()[l].bias[k] = b - H;
            let down = probe.loss(batch);
            probe.layers_mut()[l].bias[k] = b;
            worst = worst.max(rel(grads.bias[l][k], (up - down) / (2.0 * H)));
        }
    }
    worst
}
