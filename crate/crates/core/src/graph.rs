//! Fixed-size labeled graphs and the canonical edge enumeration used by every game.
//!
//! Nodes and edge indices are 0-based: the edge written `(1,2)` with 1-based
//! labels is `(0,1)` here.
//!
//! Adjacency is stored as one `u64` bitmask per node, which bounds the node
//! count by [`MAX_NODES`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g6;

/// Largest supported node count (one adjacency word per node).
pub const MAX_NODES: usize = 64;

/// Number of edge slots on `n` nodes: `n(n-1)/2`, or `n(n+1)/2` with self-loops.
pub fn edge_slots(n: usize, allow_self_loops: bool) -> usize {
    if allow_self_loops {
        n * (n + 1) / 2
    } else {
        n * n.saturating_sub(1) / 2
    }
}

/// Position of an edge in the canonical enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeIndex(pub usize);

/// How edge slots are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeOrder {
    /// Row by row: `(0,1), (0,2), …, (0,n-1), (1,2), …`.
    #[default]
    Linear,
    /// Clique-expanding: `(0,1), (0,2), (1,2), (0,3), …`, i.e. sorted by the larger endpoint.
    CliqueExpanding,
}

impl std::str::FromStr for EdgeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(EdgeOrder::Linear),
            "clique" | "clique-expanding" => Ok(EdgeOrder::CliqueExpanding),
            _ => Err(Error::InvalidConfig(format!("unknown edge order {s:?} (expected linear or clique)"))),
        }
    }
}

/// Linear-order index of the first slot in row `i`.
fn row_offset(i: usize, n: usize, allow_self_loops: bool) -> usize {
    if allow_self_loops {
        i * n - i * i.saturating_sub(1) / 2
    } else {
        i * n - i * (i + 1) / 2
    }
}

/// Maps a linear-order edge index to its endpoint pair `(i, j)` with `i <= j`.
///
/// Self-loop slots `(i, i)` are interleaved at the head of each row when
/// `allow_self_loops` is set, so row `i` reads `(i,i), (i,i+1), …`.
pub fn edge_index_to_pair(k: EdgeIndex, n: usize, allow_self_loops: bool) -> Result<(usize, usize)> {
    let slots = edge_slots(n, allow_self_loops);
    if k.0 >= slots {
        return Err(Error::EdgeIndexOutOfRange { index: k.0, slots });
    }
    let first = usize::from(!allow_self_loops);
    let mut i = 0;
    while row_offset(i + 1, n, allow_self_loops) <= k.0 {
        i += 1;
    }
    Ok((i, i + first + (k.0 - row_offset(i, n, allow_self_loops))))
}

/// Inverse of [`edge_index_to_pair`]; accepts the endpoints in either order.
pub fn pair_to_edge_index(i: usize, j: usize, n: usize, allow_self_loops: bool) -> Result<EdgeIndex> {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if j >= n {
        return Err(Error::NodeOutOfRange { node: j, n });
    }
    if i == j && !allow_self_loops {
        return Err(Error::SelfLoopNotAllowed { node: i });
    }
    let first = usize::from(!allow_self_loops);
    Ok(EdgeIndex(row_offset(i, n, allow_self_loops) + (j - i - first)))
}

/// Precomputed bijection between edge indices and pairs for one `(n, order, loops)` triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTable {
    n: usize,
    allow_self_loops: bool,
    order: EdgeOrder,
    pairs: Vec<(u8, u8)>,
    index: Vec<u32>,
}

impl EdgeTable {
    pub fn new(n: usize, allow_self_loops: bool, order: EdgeOrder) -> Self {
        let mut pairs = Vec::with_capacity(edge_slots(n, allow_self_loops));
        let first = usize::from(!allow_self_loops);
        match order {
            EdgeOrder::Linear => {
                for i in 0..n {
                    for j in (i + first)..n {
                        pairs.push((i as u8, j as u8));
                    }
                }
            }
            EdgeOrder::CliqueExpanding => {
                for j in 0..n {
                    for i in 0..(j + 1 - first) {
                        pairs.push((i as u8, j as u8));
                    }
                }
            }
        }
        let mut index = vec![u32::MAX; n * n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            index[i as usize * n + j as usize] = k as u32;
            index[j as usize * n + i as usize] = k as u32;
        }
        Self { n, allow_self_loops, order, pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn order(&self) -> EdgeOrder {
        self.order
    }

    pub fn pair(&self, k: EdgeIndex) -> Result<(usize, usize)> {
        self.pairs
            .get(k.0)
            .map(|&(i, j)| (i as usize, j as usize))
            .ok_or(Error::EdgeIndexOutOfRange { index: k.0, slots: self.pairs.len() })
    }

    pub fn index(&self, i: usize, j: usize) -> Result<EdgeIndex> {
        if i >= self.n || j >= self.n {
            return Err(Error::NodeOutOfRange { node: i.max(j), n: self.n });
        }
        if i == j && !self.allow_self_loops {
            return Err(Error::SelfLoopNotAllowed { node: i });
        }
        Ok(EdgeIndex(self.index[i * self.n + j] as usize))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(i, j)| (i as usize, j as usize))
    }
}

/// Starting graph of a game.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGraph {
    Empty,
    #[default]
    Complete,
    Graph6(String),
}

/// Undirected simple graph on a fixed node set, with optional self-loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    allow_self_loops: bool,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize, allow_self_loops: bool) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::InvalidNodeCount { got: n, max: MAX_NODES });
        }
        Ok(Self { n, allow_self_loops, rows: vec![0; n] })
    }

    /// All `i < j` pairs; never contains self-loops.
    pub fn complete(n: usize, allow_self_loops: bool) -> Result<Self> {
        let mut g = Self::empty(n, allow_self_loops)?;
        let all = full_mask(n);
        for (i, row) in g.rows.iter_mut().enumerate() {
            *row = all & !(1u64 << i);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n, false)?;
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Star with hub 0.
    pub fn star(n: usize) -> Result<Self> {
        Self::from_edges(n, (1..n).map(|j| (0, j)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::from_edges(n, (1..n).map(|j| (j - 1, j)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidNodeCount { got: n, max: MAX_NODES });
        }
        Self::from_edges(n, (0..n).map(|j| (j, (j + 1) % n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn allows_self_loops(&self) -> bool {
        self.allow_self_loops
    }

    fn check_nodes(&self, i: usize, j: usize) -> Result<()> {
        for node in [i, j] {
            if node >= self.n {
                return Err(Error::NodeOutOfRange { node, n: self.n });
            }
        }
        if i == j && !self.allow_self_loops {
            return Err(Error::SelfLoopNotAllowed { node: i });
        }
        Ok(())
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.rows[i] >> j & 1 == 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_nodes(i, j)?;
        self.rows[i] |= 1 << j;
        self.rows[j] |= 1 << i;
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_nodes(i, j)?;
        self.rows[i] &= !(1 << j);
        self.rows[j] &= !(1 << i);
        Ok(())
    }

    /// Toggles the presence of `(i, j)`. Returns whether the edge is present afterwards.
    pub fn flip(&mut self, i: usize, j: usize) -> Result<bool> {
        self.check_nodes(i, j)?;
        self.rows[i] ^= 1 << j;
        if i != j {
            self.rows[j] ^= 1 << i;
        }
        Ok(self.has_edge(i, j))
    }

    /// Flips the edge at linear-order index `e`, returning the new graph.
    pub fn flip_edge(&self, e: EdgeIndex) -> Result<Self> {
        let (i, j) = edge_index_to_pair(e, self.n, self.allow_self_loops)?;
        let mut g = self.clone();
        g.flip(i, j)?;
        Ok(g)
    }

    /// Neighbor bitmask of node `i`, self-loop bit included.
    pub fn neighbors_mask(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.rows[i] & !(1u64 << i);
        bits(mask)
    }

    /// Simple-edge degree; self-loops are not counted.
    pub fn degree(&self, i: usize) -> usize {
        (self.rows[i] & !(1u64 << i)).count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n).any(|i| self.rows[i] >> i & 1 == 1)
    }

    /// Number of stored pairs, self-loops included.
    pub fn edge_count(&self) -> usize {
        let loops = (0..self.n).filter(|&i| self.rows[i] >> i & 1 == 1).count();
        let total: usize = self.rows.iter().map(|r| r.count_ones() as usize).sum();
        (total - loops) / 2 + loops
    }

    /// Stored pairs `(i, j)` with `i <= j` in linear order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| bits(self.rows[i] & !low_mask(i)).map(move |j| (i, j)))
            .collect()
    }

    pub fn without_self_loops(&self) -> Self {
        let mut g = self.clone();
        for (i, row) in g.rows.iter_mut().enumerate() {
            *row &= !(1u64 << i);
        }
        g
    }

    /// Row-major `n x n` 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| (self.rows[i] >> j & 1) as u8).collect())
            .collect()
    }

    /// Builds a graph from a symmetric 0/1 matrix; nonzero diagonal entries become self-loops.
    pub fn from_adjacency_matrix(matrix: &[Vec<u8>], allow_self_loops: bool) -> Result<Self> {
        let mut g = Self::empty(matrix.len(), allow_self_loops)?;
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != matrix.len() {
                return Err(Error::NodeCountMismatch { expected: matrix.len(), got: row.len() });
            }
            for j in i..row.len() {
                if row[j] != 0 || matrix[j][i] != 0 {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }

    /// Relabels nodes: node `v` of `self` becomes node `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut g = Self { n: self.n, allow_self_loops: self.allow_self_loops, rows: vec![0; self.n] };
        for (i, j) in self.edges() {
            let (a, b) = (perm[i], perm[j]);
            g.rows[a] |= 1 << b;
            g.rows[b] |= 1 << a;
        }
        g
    }

    /// Whether every node is reachable from node 0 over simple edges.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let mut unseen = full_mask(self.n);
        let mut components = 0;
        while unseen != 0 {
            components += 1;
            let start = unseen.trailing_zeros() as usize;
            let mut frontier = 1u64 << start;
            unseen &= !frontier;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.rows[v] & unseen;
                unseen &= !fresh;
                frontier |= fresh;
            }
        }
        components
    }

    /// Whether every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn to_g6(&self) -> Result<String> {
        g6::encode(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}

/// Builds the starting graph of a game.
pub fn new_graph(n: usize, initial: &InitialGraph, allow_self_loops: bool) -> Result<Graph> {
    match initial {
        InitialGraph::Empty => Graph::empty(n, allow_self_loops),
        InitialGraph::Complete => Graph::complete(n, allow_self_loops),
        InitialGraph::Graph6(text) => {
            let g = g6::decode(text)?;
            if g.n() != n {
                return Err(Error::NodeCountMismatch { expected: n, got: g.n() });
            }
            let mut out = Graph::empty(n, allow_self_loops)?;
            out.rows = g.rows;
            Ok(out)
        }
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn low_mask(i: usize) -> u64 {
    full_mask(i)
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}
