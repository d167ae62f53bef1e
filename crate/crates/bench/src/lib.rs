//! Deterministic inputs shared by the benchmarks.

use graphgames_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` samples of G(n, p), reproducible from `seed`.
pub fn gnp_graphs(n: usize, p: f64, count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(p)).collect();
            Graph::from_edges(n, edges).expect("n within limits")
        })
        .collect()
}
