//! Maximum-cardinality matching on general graphs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MAX_NODES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingResult {
    pub size: usize,
    /// Matched pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl MatchingResult {
    fn from_mates(mates: &[Option<usize>]) -> Self {
        let mut edges: Vec<_> = mates
            .iter()
            .enumerate()
            .filter_map(|(v, m)| m.filter(|&u| v < u).map(|u| (v, u)))
            .collect();
        edges.sort_unstable();
        Self { size: edges.len(), edges }
    }

    /// Whether the pairs are vertex-disjoint edges of `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut used = 0u64;
        for &(i, j) in &self.edges {
            if i == j || !g.has_edge(i, j) || used >> i & 1 == 1 || used >> j & 1 == 1 {
                return false;
            }
            used |= 1 << i | 1 << j;
        }
        self.size == self.edges.len()
    }
}

/// Edmonds' blossom algorithm. Self-loops are ignored.
///
/// Grows alternating BFS trees from each exposed vertex; an edge between two
/// outer vertices of the same tree closes an odd cycle that is contracted by
/// relabeling its vertices with the cycle's base.
pub fn max_matching(g: &Graph) -> MatchingResult {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut search = BlossomSearch::new(n);
    // greedy start
    for (v, neighbours) in adj.iter().enumerate() {
        if search.mate[v].is_none() {
            if let Some(&u) = neighbours.iter().find(|&&u| search.mate[u].is_none()) {
                search.mate[v] = Some(u);
                search.mate[u] = Some(v);
            }
        }
    }
    for root in 0..n {
        if search.mate[root].is_none() {
            if let Some(end) = search.find_augmenting_path(root, &adj) {
                search.augment(end);
            }
        }
    }
    MatchingResult::from_mates(&search.mate)
}

struct BlossomSearch {
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        Self {
            mate: vec![None; n],
            parent: vec![None; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::with_capacity(n),
        }
    }

    fn lowest_common_base(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                Some(m) => a = self.parent[m].expect("matched outer vertex has a tree parent"),
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = self.mate[b].expect("walk stays inside the tree");
            b = self.parent[m].expect("matched outer vertex has a tree parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, stop: usize, mut child: usize) {
        while self.base[v] != stop {
            let m = self.mate[v].expect("blossom path alternates");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("blossom path alternates");
        }
    }

    fn find_augmenting_path(&mut self, root: usize, adj: &[Vec<usize>]) -> Option<usize> {
        let n = self.mate.len();
        self.parent.fill(None);
        self.outer.fill(false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.outer[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer = to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let blossom_base = self.lowest_common_base(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, blossom_base, to);
                    self.mark_path(to, blossom_base, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = blossom_base;
                            if !self.outer[i] {
                                self.outer[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.outer[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        loop {
            let pv = self.parent[v].expect("augmenting path is rooted");
            let next = self.mate[pv];
            self.mate[v] = Some(pv);
            self.mate[pv] = Some(v);
            match next {
                Some(u) => v = u,
                None => break,
            }
        }
    }
}

/// Exhaustive maximum matching, for cross-checking [`max_matching`] on small graphs.
pub fn brute_force_matching(g: &Graph) -> Result<MatchingResult> {
    if g.n() > BRUTE_FORCE_MAX_NODES {
        return Err(Error::Unsupported(format!(
            "brute-force matching is limited to {BRUTE_FORCE_MAX_NODES} nodes, got {}",
            g.n()
        )));
    }
    let mut best = Vec::new();
    let mut current = Vec::new();
    let free = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    exhaust(g, free, &mut current, &mut best);
    best.sort_unstable();
    Ok(MatchingResult { size: best.len(), edges: best })
}

fn exhaust(g: &Graph, free: u64, current: &mut Vec<(usize, usize)>, best: &mut Vec<(usize, usize)>) {
    if current.len() + free.count_ones() as usize / 2 <= best.len() {
        return;
    }
    if free == 0 {
        *best = current.clone();
        return;
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1u64 << v);
    let mut candidates = g.neighbors_mask(v) & rest;
    while candidates != 0 {
        let u = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        current.push((v, u));
        exhaust(g, rest & !(1u64 << u), current, best);
        current.pop();
    }
    // v stays exposed
    if current.len() > best.len() {
        *best = current.clone();
    }
    exhaust(g, rest, current, best);
}
