//! Conjectures in normal form and the rewards derived from them.
//!
//! A conjecture is a score `f` over graphs together with the claim that
//! `f(G) <= 0` ([`Comparison::Weak`]) or `f(G) < 0` ([`Comparison::Strict`])
//! for every graph. A counterexample is any graph breaking that claim.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{
    adjacency_spectral_radius_with, laplacian_spectrum_with, max_matching, EigenOptions, EIGEN_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Conjecture `f(G) < 0`; a counterexample has `f(G) >= 0`.
    Strict,
    /// Conjecture `f(G) <= 0`; a counterexample has `f(G) > 0`.
    Weak,
}

impl Comparison {
    /// Whether `score` breaks the conjecture with a margin of `tol`.
    pub fn crossed(self, score: f64, tol: f64) -> bool {
        match self {
            Comparison::Weak => score > tol,
            Comparison::Strict => score >= -tol,
        }
    }
}

/// A conjecture's score function.
pub trait ScoreFn: Send + Sync {
    /// `normalize` is forwarded from the environment settings; `opts` controls eigensolver accuracy.
    fn score(&self, g: &Graph, normalize: bool, opts: EigenOptions) -> f64;
}

impl<F> ScoreFn for F
where
    F: Fn(&Graph, bool, EigenOptions) -> f64 + Send + Sync,
{
    fn score(&self, g: &Graph, normalize: bool, opts: EigenOptions) -> f64 {
        self(g, normalize, opts)
    }
}

#[derive(Clone)]
pub struct Conjecture {
    name: String,
    comparison: Comparison,
    normalizable: bool,
    scorer: Arc<dyn ScoreFn>,
}

impl fmt::Debug for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Conjecture")
            .field("name", &self.name)
            .field("comparison", &self.comparison)
            .field("normalizable", &self.normalizable)
            .finish_non_exhaustive()
    }
}

impl Conjecture {
    pub fn new(name: impl Into<String>, comparison: Comparison, normalizable: bool, scorer: impl ScoreFn + 'static) -> Self {
        Self { name: name.into(), comparison, normalizable, scorer: Arc::new(scorer) }
    }

    /// Plugs in an external score taking the 0/1 adjacency matrix and the normalize flag.
    pub fn from_adjacency_fn<F>(name: impl Into<String>, comparison: Comparison, f: F) -> Self
    where
        F: Fn(&[Vec<u8>], bool) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, comparison, true, move |g: &Graph, normalize: bool, _: EigenOptions| {
            f(&g.adjacency_matrix(), normalize)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn comparison(&self) -> Comparison {
        self.comparison
    }

    pub fn normalizable(&self) -> bool {
        self.normalizable
    }

    pub fn score(&self, g: &Graph, normalize: bool) -> f64 {
        self.score_with(g, normalize, EigenOptions::STANDARD)
    }

    pub fn score_with(&self, g: &Graph, normalize: bool, opts: EigenOptions) -> f64 {
        self.scorer.score(g, normalize && self.normalizable, opts)
    }
}

/// Outcome of testing one graph against a conjecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    None,
    /// Crossed the threshold under the standard eigensolver but not after tightening.
    Candidate { score: f64 },
    Verified { score: f64, g6: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
}

/// Margin a strict-mode score may fall below zero and still count after tightening.
const STRICT_TIGHT_TOL: f64 = 1e-12;

/// Two-tier check: the standard score must cross the threshold by `EIGEN_TOL`,
/// then a tightened recomputation must confirm it.
pub fn check_counterexample(c: &Conjecture, g: &Graph) -> Verdict {
    let score = c.score(g, false);
    if !c.comparison.crossed(score, EIGEN_TOL) {
        return Verdict::None;
    }
    let tight = c.score_with(g, false, EigenOptions::TIGHT);
    let confirmed = match c.comparison {
        Comparison::Weak => tight > EIGEN_TOL,
        Comparison::Strict => tight >= -STRICT_TIGHT_TOL,
    };
    match (confirmed, g.without_self_loops().to_g6()) {
        (true, Ok(g6)) => Verdict::Verified { score: tight, g6 },
        _ => Verdict::Candidate { score },
    }
}

fn normalized(value: f64, n: usize, normalize: bool) -> f64 {
    if normalize {
        value / n as f64
    } else {
        value
    }
}

/// `sqrt(n-1) + offset - λ1(G) - μ(G)` on connected graphs, `-n` otherwise.
fn matching_spectral_score(g: &Graph, offset: f64, normalize: bool, opts: EigenOptions) -> f64 {
    let g = g.without_self_loops();
    let n = g.n();
    let raw = if g.is_connected() {
        ((n - 1) as f64).sqrt() + offset - adjacency_spectral_radius_with(&g, opts) - max_matching(&g).size as f64
    } else {
        -(n as f64)
    };
    normalized(raw, n, normalize)
}

/// Wagner's spectral-radius-plus-matching bound: `λ1(G) + μ(G) >= sqrt(n-1) + 1` for connected graphs.
///
/// Scored as `sqrt(n-1) + 1 - λ1 - μ`; disconnected graphs get `-n`. Stars
/// attain equality (score 0).
pub fn wagner_conjecture_2_1(n: usize) -> Result<Conjecture> {
    require_nodes(n, 3)?;
    Ok(Conjecture::new("wagner21", Comparison::Weak, true, |g: &Graph, normalize, opts| {
        matching_spectral_score(g, 1.0, normalize, opts)
    }))
}

/// The variant `sqrt(n-1) - 1 - λ1 - μ`, i.e. the inequality with `- 1`.
///
/// It is two below [`wagner_conjecture_2_1`] everywhere, so stars score −2
/// and no connected graph on more than a handful of nodes can be positive.
pub fn wagner_conjecture_2_1_printed(n: usize) -> Result<Conjecture> {
    require_nodes(n, 3)?;
    Ok(Conjecture::new("wagner21-printed", Comparison::Weak, true, |g: &Graph, normalize, opts| {
        matching_spectral_score(g, -1.0, normalize, opts)
    }))
}

/// Brouwer's conjecture: for every `t`, the sum of the `t` largest Laplacian
/// eigenvalues is at most `e(G) + t(t+1)/2`.
///
/// The score is the largest violation over `t = 1..=n`.
pub fn brouwer_conjecture(n: usize) -> Result<Conjecture> {
    require_nodes(n, 1)?;
    Ok(Conjecture::new("brouwer", Comparison::Weak, true, |g: &Graph, normalize, opts| {
        let g = g.without_self_loops();
        let spectrum = laplacian_spectrum_with(&g, opts).expect("self-loops stripped");
        let edges = g.edge_count() as f64;
        let mut partial = 0.0;
        let mut best = f64::NEG_INFINITY;
        for (i, mu) in spectrum.values().iter().enumerate() {
            let t = (i + 1) as f64;
            partial += mu;
            best = best.max(partial - edges - t * (t + 1.0) / 2.0);
        }
        normalized(best, g.n(), normalize)
    }))
}

/// Toy objective `f(G) = e(G)`, useful for exercising the search stack.
pub fn edge_count_objective(n: usize) -> Result<Conjecture> {
    require_nodes(n, 1)?;
    Ok(Conjecture::new("edge-count", Comparison::Weak, true, |g: &Graph, normalize, _: EigenOptions| {
        normalized(g.edge_count() as f64, g.n(), normalize)
    }))
}

fn require_nodes(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidConfig(format!("conjecture needs at least {min} nodes, got {n}")));
    }
    Ok(())
}

type Factory = Arc<dyn Fn(usize) -> Result<Conjecture> + Send + Sync>;

/// Conjectures by name; each entry builds the conjecture for a node count.
#[derive(Clone)]
pub struct Registry {
    entries: BTreeMap<String, (String, Factory)>,
}

impl Registry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("wagner21", "sqrt(n-1) + 1 - λ1(G) - μ(G) on connected graphs", wagner_conjecture_2_1);
        r.register("wagner21-printed", "sqrt(n-1) - 1 - λ1(G) - μ(G) on connected graphs", wagner_conjecture_2_1_printed);
        r.register("brouwer", "max_t sum of t largest Laplacian eigenvalues - e(G) - t(t+1)/2", brouwer_conjecture);
        r.register("edge-count", "e(G) (toy objective)", edge_count_objective);
        r
    }

    pub fn register<F>(&mut self, name: &str, description: &str, factory: F)
    where
        F: Fn(usize) -> Result<Conjecture> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), (description.to_string(), Arc::new(factory)));
    }

    pub fn get(&self, name: &str, n: usize) -> Result<Conjecture> {
        let (_, factory) = self
            .entries
            .get(name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown conjecture {name:?}")))?;
        factory(n)
    }

    /// `(name, description)` pairs in name order.
    pub fn list(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, (d, _))| (k.as_str(), d.as_str()))
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardMode {
    /// Everything paid at the end: `f(G_T)`.
    #[default]
    Sparse,
    /// `f(G_t) - f(G_{t-1})` every step, telescoping to `f(G_T)`.
    Incremental,
}

impl std::str::FromStr for RewardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sparse" => Ok(RewardMode::Sparse),
            "incremental" => Ok(RewardMode::Incremental),
            _ => Err(Error::InvalidConfig(format!("unknown reward type {s:?} (expected sparse or incremental)"))),
        }
    }
}

/// Turns a conjecture into per-step rewards for one episode at a time.
///
/// In incremental mode the first increment is measured against the actual
/// starting graph, and the starting score is paid back on the terminal step,
/// so the episode total is exactly `f(G_T)`.
#[derive(Debug, Clone)]
pub struct RewardAdapter {
    conjecture: Conjecture,
    mode: RewardMode,
    normalize: bool,
    baseline: f64,
    last: f64,
}

/// One emitted reward, with the score of the current graph when it was computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emitted {
    pub reward: f64,
    pub score: Option<f64>,
}

impl RewardAdapter {
    pub fn new(conjecture: Conjecture, mode: RewardMode, normalize: bool) -> Self {
        Self { conjecture, mode, normalize, baseline: 0.0, last: 0.0 }
    }

    pub fn conjecture(&self) -> &Conjecture {
        &self.conjecture
    }

    pub fn mode(&self) -> RewardMode {
        self.mode
    }

    pub fn normalize(&self) -> bool {
        self.normalize
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn score(&self, g: &Graph) -> f64 {
        self.conjecture.score(g, self.normalize)
    }

    /// Captures the starting score. Sparse mode skips the computation.
    pub fn reset(&mut self, initial: &Graph) {
        self.baseline = match self.mode {
            RewardMode::Sparse => 0.0,
            RewardMode::Incremental => self.score(initial),
        };
        self.last = self.baseline;
    }

    pub fn emit(&mut self, current: &Graph, terminal: bool) -> Emitted {
        match self.mode {
            RewardMode::Sparse if !terminal => Emitted { reward: 0.0, score: None },
            RewardMode::Sparse => {
                let s = self.score(current);
                Emitted { reward: s, score: Some(s) }
            }
            RewardMode::Incremental => {
                let s = self.score(current);
                let mut reward = s - self.last;
                self.last = s;
                if terminal {
                    reward += self.baseline;
                }
                Emitted { reward, score: Some(s) }
            }
        }
    }
}

/// Stateless form of [`RewardAdapter::emit`] for step `t` of a horizon-`horizon` episode.
pub fn emit_reward(adapter: &RewardAdapter, prev: &Graph, curr: &Graph, t: usize, horizon: usize) -> f64 {
    let terminal = t >= horizon;
    match adapter.mode {
        RewardMode::Sparse if terminal => adapter.score(curr),
        RewardMode::Sparse => 0.0,
        RewardMode::Incremental => {
            let prev_score = if t <= 1 { adapter.baseline } else { adapter.score(prev) };
            let r = adapter.score(curr) - prev_score;
            if terminal {
                r + adapter.baseline
            } else {
                r
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n, false).unwrap()
    }

    #[test]
    fn wagner_closed_forms() {
        let printed = wagner_conjecture_2_1_printed(18).unwrap();
        assert!((printed.score(&Graph::star(18).unwrap(), false) + 2.0).abs() < 1e-9);
        let k3 = wagner_conjecture_2_1_printed(3).unwrap().score(&k(3), false);
        assert!((k3 - (2f64.sqrt() - 4.0)).abs() < 1e-9);
        let w = wagner_conjecture_2_1(18).unwrap();
        assert!(w.score(&Graph::star(18).unwrap(), false).abs() < 1e-9);
    }

    #[test]
    fn wagner_counterexample_double_star() {
        // hubs 0 and 1 share neighbour 2; 7 leaves on 0, 8 leaves on 1
        let mut edges = vec![(0, 2), (1, 2)];
        edges.extend((3..10).map(|v| (0, v)));
        edges.extend((10..18).map(|v| (1, v)));
        let g = Graph::from_edges(18, edges).unwrap();
        let w = wagner_conjecture_2_1(18).unwrap();
        let s = w.score(&g, false);
        assert!((s - 0.02181).abs() < 5e-6, "{s}");
        match check_counterexample(&w, &g) {
            Verdict::Verified { score, g6 } => {
                assert!(score > 0.0);
                assert_eq!(w.score(&crate::g6::decode(&g6).unwrap(), false), s);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wagner_disconnected_penalty() {
        let w = wagner_conjecture_2_1(6).unwrap();
        let g = Graph::empty(6, false).unwrap();
        assert_eq!(w.score(&g, false), -6.0);
        assert_eq!(w.score(&g, true), -1.0);
        assert!(wagner_conjecture_2_1(2).is_err());
    }

    #[test]
    fn brouwer_examples() {
        let b = brouwer_conjecture(4).unwrap();
        assert!(b.score(&k(4), false).abs() < 1e-9);
        let b5 = brouwer_conjecture(5).unwrap();
        assert_eq!(b5.score(&Graph::empty(5, false).unwrap(), false), -1.0);
        assert_eq!(check_counterexample(&b, &k(4)), Verdict::None);
    }

    #[test]
    fn verdicts() {
        let w = wagner_conjecture_2_1_printed(18).unwrap();
        assert_eq!(check_counterexample(&w, &Graph::star(18).unwrap()), Verdict::None);
        let always = Conjecture::new("one", Comparison::Weak, false, |_: &Graph, _, _: EigenOptions| 1.0);
        assert!(check_counterexample(&always, &k(3)).is_verified());
        let zero = Conjecture::new("zero", Comparison::Strict, false, |_: &Graph, _, _: EigenOptions| 0.0);
        assert!(check_counterexample(&zero, &k(3)).is_verified());
        let zero_weak = Conjecture::new("zero", Comparison::Weak, false, |_: &Graph, _, _: EigenOptions| 0.0);
        assert_eq!(check_counterexample(&zero_weak, &k(3)), Verdict::None);
        // crosses under the standard solver only
        let flaky = Conjecture::new("flaky", Comparison::Weak, false, |_: &Graph, _, o: EigenOptions| {
            if o == EigenOptions::TIGHT {
                -1e-13
            } else {
                2e-9
            }
        });
        assert_eq!(check_counterexample(&flaky, &k(3)), Verdict::Candidate { score: 2e-9 });
    }

    #[test]
    fn adjacency_plugin_receives_flag() {
        let c = Conjecture::from_adjacency_fn("ones", Comparison::Weak, |adj, normalize| {
            let total: u32 = adj.iter().flatten().map(|&x| x as u32).sum();
            if normalize {
                total as f64 / adj.len() as f64
            } else {
                total as f64
            }
        });
        assert_eq!(c.score(&k(4), false), 12.0);
        assert_eq!(c.score(&k(4), true), 3.0);
    }

    #[test]
    fn adapters() {
        let c = edge_count_objective(4).unwrap();
        let start = k(4);
        let mut sparse = RewardAdapter::new(c.clone(), RewardMode::Sparse, false);
        sparse.reset(&start);
        assert_eq!(sparse.emit(&start, false).reward, 0.0);
        assert_eq!(sparse.emit(&start, true).reward, 6.0);

        let mut inc = RewardAdapter::new(c, RewardMode::Incremental, false);
        inc.reset(&start);
        assert_eq!(inc.baseline(), 6.0);
        assert_eq!(inc.emit(&start, false).reward, 0.0);
        let g1 = start.flip_edge(crate::EdgeIndex(0)).unwrap();
        assert_eq!(inc.emit(&g1, false).reward, -1.0);
        assert_eq!(emit_reward(&inc, &start, &g1, 1, 6), -1.0);
        assert_eq!(emit_reward(&inc, &g1, &g1, 6, 6), 6.0);
        assert_eq!(inc.emit(&g1, true).reward, 6.0);
    }

    #[test]
    fn registry() {
        let r = Registry::builtin();
        assert_eq!(r.get("brouwer", 5).unwrap().name(), "brouwer");
        assert!(r.get("nope", 5).is_err());
        assert!(r.get("wagner21", 2).is_err());
        assert!(r.list().any(|(n, _)| n == "wagner21"));
    }
}
