//! One-dimensional Weisfeiler-Leman colour refinement.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-round sorted `(colour, count)` histograms.
pub type Signature = Vec<Vec<(u32, u32)>>;

/// Assigns stable integer colours to `(previous colour, sorted neighbour colours)` keys.
///
/// Sharing one interner across graphs makes their colours directly comparable.
#[derive(Debug, Default, Clone)]
pub struct ColorInterner {
    ids: HashMap<(u32, Vec<u32>), u32>,
}

impl ColorInterner {
    pub fn new() -> Self {
        Self::default()
    }

    fn refine(&mut self, g: &Graph, colors: &[u32]) -> Vec<u32> {
        (0..g.n())
            .map(|v| {
                let mut nbrs: Vec<u32> = g.neighbors(v).filter(|&u| u != v).map(|u| colors[u]).collect();
                nbrs.sort_unstable();
                let next = self.ids.len() as u32 + 1;
                *self.ids.entry((colors[v], nbrs)).or_insert(next)
            })
            .collect()
    }

    /// Colour histograms of every round, up to and including the first round
    /// that does not split any class.
    ///
    /// Two graphs refined with the same interner are WL-equivalent exactly when
    /// their signatures are equal.
    pub fn signature(&mut self, g: &Graph) -> Signature {
        let mut colors = vec![0u32; g.n()];
        let mut classes = usize::from(g.n() > 0);
        let mut rounds = vec![histogram(&colors)];
        loop {
            colors = self.refine(g, &colors);
            let hist = histogram(&colors);
            let split = hist.len() > classes;
            classes = hist.len();
            rounds.push(hist);
            if !split {
                return rounds;
            }
        }
    }
}

fn histogram(colors: &[u32]) -> Vec<(u32, u32)> {
    let mut counts: HashMap<u32, u32> = HashMap::new();
    for &c in colors {
        *counts.entry(c).or_default() += 1;
    }
    let mut hist: Vec<_> = counts.into_iter().collect();
    hist.sort_unstable();
    hist
}

/// Outcome of a pairwise colour-refinement test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WlOutcome {
    /// `false` proves the graphs non-isomorphic; `true` means refinement could not tell them apart.
    pub equivalent: bool,
    pub rounds: usize,
}

/// Refines both graphs jointly until the histograms differ, the partition
/// stops splitting, or `max_rounds` (default: the node count) is reached.
pub fn wl1_test(g1: &Graph, g2: &Graph, max_rounds: Option<usize>) -> Result<WlOutcome> {
    if g1.n() != g2.n() {
        return Err(Error::NodeCountMismatch { expected: g1.n(), got: g2.n() });
    }
    let limit = max_rounds.unwrap_or(g1.n()).max(1);
    let mut interner = ColorInterner::new();
    let mut c1 = vec![0u32; g1.n()];
    let mut c2 = vec![0u32; g2.n()];
    let mut classes = 1;
    for round in 1..=limit {
        c1 = interner.refine(g1, &c1);
        c2 = interner.refine(g2, &c2);
        let (h1, h2) = (histogram(&c1), histogram(&c2));
        if h1 != h2 {
            return Ok(WlOutcome { equivalent: false, rounds: round });
        }
        if h1.len() == classes {
            return Ok(WlOutcome { equivalent: true, rounds: round });
        }
        classes = h1.len();
    }
    Ok(WlOutcome { equivalent: true, rounds: limit })
}

/// All index pairs `(i, j)`, `i < j`, whose graphs colour refinement cannot distinguish.
///
/// Graphs are bucketed by their refinement signature, which keys on exactly
/// the equivalence being tested, so no pair is missed.
pub fn wl_equivalent_pairs(graphs: &[Graph]) -> Vec<(usize, usize)> {
    let mut interner = ColorInterner::new();
    let mut buckets: HashMap<(usize, Signature), Vec<usize>> = HashMap::new();
    for (i, g) in graphs.iter().enumerate() {
        buckets.entry((g.n(), interner.signature(g))).or_default().push(i);
    }
    let mut pairs: Vec<(usize, usize)> = buckets
        .values()
        .flat_map(|idx| {
            idx.iter()
                .enumerate()
                .flat_map(move |(a, &i)| idx[a + 1..].iter().map(move |&j| (i, j)))
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn regular_graphs_are_indistinguishable() {
        let c6 = Graph::cycle(6).unwrap();
        assert!(wl1_test(&c6, &two_triangles(), None).unwrap().equivalent);
        assert!(wl1_test(&c6, &c6, None).unwrap().equivalent);
    }

    #[test]
    fn degree_sequences_separate() {
        let p4 = Graph::path(4).unwrap();
        let s4 = Graph::star(4).unwrap();
        assert!(!wl1_test(&p4, &s4, None).unwrap().equivalent);
        assert!(wl1_test(&p4, &Graph::path(5).unwrap(), None).is_err());
    }

    #[test]
    fn second_round_separates() {
        // triangle with a tail vs square with a pendant: both have degrees 3,2,2,2,1
        let a = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        let b = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4)]).unwrap();
        let out = wl1_test(&a, &b, None).unwrap();
        assert!(!out.equivalent);
        assert!(out.rounds >= 2);
    }

    #[test]
    fn relabelled_graph_is_equivalent() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)]).unwrap();
        let h = g.permuted(&[5, 3, 1, 0, 2, 4]);
        assert!(wl1_test(&g, &h, None).unwrap().equivalent);
    }

    #[test]
    fn pairs_agree_with_pairwise_test() {
        let graphs = vec![
            Graph::cycle(6).unwrap(),
            Graph::path(6).unwrap(),
            two_triangles(),
            Graph::star(6).unwrap(),
            Graph::path(6).unwrap().permuted(&[1, 0, 2, 3, 5, 4]),
            Graph::empty(6, false).unwrap(),
        ];
        let pairs = wl_equivalent_pairs(&graphs);
        let mut brute = Vec::new();
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                if wl1_test(&graphs[i], &graphs[j], None).unwrap().equivalent {
                    brute.push((i, j));
                }
            }
        }
        assert_eq!(pairs, brute);
        assert_eq!(pairs, vec![(0, 2), (1, 4)]);
    }
}
