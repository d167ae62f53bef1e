//! The four graph-building games behind one reset/step contract.
//!
//! # Action encodings
//!
//! With `n` nodes and `m` edge slots (see [`crate::graph::edge_slots`]):
//!
//! | game   | actions      | meaning of action `k`                                              |
//! |--------|--------------|--------------------------------------------------------------------|
//! | Linear | `{0, 1}`     | `0` passes edge number `t`, `1` flips it                          |
//! | Local  | `0..2n`      | move the agent from `i` to `j = k mod n`; flip `(i, j)` iff `k >= n` |
//! | Global | `0..2m`      | edge `e = k mod m`; flip it iff `k >= m`                           |
//! | Flip   | `0..m`       | flip edge `k`                                                      |
//!
//! Edge numbers refer to the configured [`EdgeOrder`] (linear by default).
//!
//! # Observation layout
//!
//! A flat 0/1 vector of length `m + T (+ n for Local)`:
//! `[0, m)` holds the edge bits in edge order, `[m, m + T)` is a one-hot of
//! the clock `t` (all zeros once the episode is over) and, for Local, the
//! last `n` entries are a one-hot of the agent's node.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge_slots, new_graph, EdgeIndex, EdgeOrder, EdgeTable, Graph, InitialGraph, MAX_NODES};
use crate::rewards::{check_counterexample, Conjecture, RewardAdapter, RewardMode, Verdict};

/// Edge an action would flip, and where it would move the agent.
type Decoded = (Option<(usize, usize)>, Option<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Game {
    Linear,
    Local,
    Global,
    Flip,
}

impl Game {
    pub const ALL: [Game; 4] = [Game::Linear, Game::Local, Game::Global, Game::Flip];

    pub fn name(self) -> &'static str {
        match self {
            Game::Linear => "linear",
            Game::Local => "local",
            Game::Global => "global",
            Game::Flip => "flip",
        }
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Game {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Game::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig("unknown game".into()))
    }
}

/// Game settings. Only `n`, `game` and the conjecture are required; everything
/// else starts at its default.
#[derive(Debug, Clone)]
pub struct EnvConfig {
    pub n: usize,
    pub game: Game,
    pub conjecture: Conjecture,
    pub reward_mode: RewardMode,
    pub normalize: bool,
    pub initial_graph: InitialGraph,
    pub allow_self_loops: bool,
    pub check_every_step: bool,
    /// Ignored by Linear, whose episodes always last one pass over the edges.
    pub horizon: Option<usize>,
    /// Local only.
    pub start_node: usize,
    pub edge_order: EdgeOrder,
}

impl EnvConfig {
    pub fn new(n: usize, game: Game, conjecture: Conjecture) -> Self {
        Self {
            n,
            game,
            conjecture,
            reward_mode: RewardMode::Sparse,
            normalize: false,
            initial_graph: InitialGraph::Complete,
            allow_self_loops: false,
            check_every_step: false,
            horizon: None,
            start_node: 0,
            edge_order: EdgeOrder::Linear,
        }
    }

    pub fn with_reward_mode(mut self, mode: RewardMode) -> Self {
        self.reward_mode = mode;
        self
    }

    pub fn with_normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn with_initial_graph(mut self, initial: InitialGraph) -> Self {
        self.initial_graph = initial;
        self
    }

    pub fn with_self_loops(mut self, allow: bool) -> Self {
        self.allow_self_loops = allow;
        self
    }

    pub fn with_check_every_step(mut self, check: bool) -> Self {
        self.check_every_step = check;
        self
    }

    pub fn with_horizon(mut self, horizon: Option<usize>) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_start_node(mut self, node: usize) -> Self {
        self.start_node = node;
        self
    }

    pub fn with_edge_order(mut self, order: EdgeOrder) -> Self {
        self.edge_order = order;
        self
    }

    /// Number of edge slots `m`.
    pub fn edge_slots(&self) -> usize {
        edge_slots(self.n, self.allow_self_loops)
    }

    /// Effective episode length `T`.
    pub fn horizon(&self) -> usize {
        match self.game {
            Game::Linear => self.edge_slots(),
            _ => self.horizon.unwrap_or_else(|| self.edge_slots()),
        }
    }

    pub fn action_space_size(&self) -> usize {
        match self.game {
            Game::Linear => 2,
            Game::Local => 2 * self.n,
            Game::Global => 2 * self.edge_slots(),
            Game::Flip => self.edge_slots(),
        }
    }

    pub fn observation_len(&self) -> usize {
        self.edge_slots() + self.horizon() + if self.game == Game::Local { self.n } else { 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_NODES {
            return Err(Error::InvalidNodeCount { got: self.n, max: MAX_NODES });
        }
        if self.edge_slots() == 0 {
            return Err(Error::InvalidConfig(format!("a graph on {} node(s) has no edge slots", self.n)));
        }
        if self.game != Game::Linear && self.horizon == Some(0) {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.start_node >= self.n {
            return Err(Error::InvalidConfig(format!("start node {} out of range", self.start_node)));
        }
        let initial = new_graph(self.n, &self.initial_graph, self.allow_self_loops)?;
        if initial.has_self_loops() && !self.allow_self_loops {
            return Err(Error::InvalidConfig("initial graph has self-loops".into()));
        }
        Ok(())
    }
}

/// Dynamic part of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvState {
    pub graph: Graph,
    /// Number of actions taken so far.
    pub t: usize,
    /// Local only.
    pub agent_node: Option<usize>,
    pub done: bool,
    pub counterexample: Option<Verdict>,
}

/// Policy input; see the module docs for the flat layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub edges: Vec<u8>,
    pub clock: Option<usize>,
    pub horizon: usize,
    pub agent: Option<usize>,
    pub n_agent_slots: usize,
}

impl Observation {
    pub fn len(&self) -> usize {
        self.edges.len() + self.horizon + self.n_agent_slots
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Positions of the ones in the flat vector, ascending.
    pub fn active_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.edges.len();
        let edges = self.edges.iter().enumerate().filter(|(_, &b)| b != 0).map(|(k, _)| k);
        let clock = self.clock.map(|t| m + t);
        let agent = self.agent.map(|a| m + self.horizon + a);
        edges.chain(clock).chain(agent)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        for k in self.active_indices() {
            v[k] = 1.0;
        }
        v
    }
}

/// Everything a step reports besides the new observation.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    /// Pair whose presence was toggled, if any.
    pub flipped: Option<(usize, usize)>,
    /// Score of the new graph when the step computed it.
    pub score: Option<f64>,
    /// Present when `check_every_step` is on.
    pub verdict: Option<Verdict>,
}

/// A running game instance. Single actor; clone it to branch.
#[derive(Debug, Clone)]
pub struct Env {
    cfg: Arc<EnvConfig>,
    table: Arc<EdgeTable>,
    horizon: usize,
    initial: Graph,
    adapter: RewardAdapter,
    state: EnvState,
}

impl Env {
    pub fn new(cfg: EnvConfig) -> Result<Self> {
        cfg.validate()?;
        let table = Arc::new(EdgeTable::new(cfg.n, cfg.allow_self_loops, cfg.edge_order));
        let initial = new_graph(cfg.n, &cfg.initial_graph, cfg.allow_self_loops)?;
        let adapter = RewardAdapter::new(cfg.conjecture.clone(), cfg.reward_mode, cfg.normalize);
        let horizon = cfg.horizon();
        let state = EnvState { graph: initial.clone(), t: 0, agent_node: None, done: false, counterexample: None };
        let mut env = Self { cfg: Arc::new(cfg), table, horizon, initial, adapter, state };
        env.reset();
        Ok(env)
    }

    /// Returns to the starting graph at `t = 0` and captures the reward baseline.
    pub fn reset(&mut self) -> Observation {
        self.state = EnvState {
            graph: self.initial.clone(),
            t: 0,
            agent_node: (self.cfg.game == Game::Local).then_some(self.cfg.start_node),
            done: false,
            counterexample: None,
        };
        self.adapter.reset(&self.state.graph);
        self.observation()
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn edge_table(&self) -> &EdgeTable {
        &self.table
    }

    pub fn action_space_size(&self) -> usize {
        self.cfg.action_space_size()
    }

    /// Score of the current graph under the configured conjecture and normalization.
    pub fn current_score(&self) -> f64 {
        self.adapter.score(&self.state.graph)
    }

    pub fn observation(&self) -> Observation {
        let g = &self.state.graph;
        let edges = self.table.pairs().map(|(i, j)| u8::from(g.has_edge(i, j))).collect();
        Observation {
            edges,
            clock: (!self.state.done).then_some(self.state.t),
            horizon: self.horizon,
            agent: self.state.agent_node,
            n_agent_slots: if self.cfg.game == Game::Local { self.cfg.n } else { 0 },
        }
    }

    /// Edge toggled by `action` (if any) and the agent's next node, without applying it.
    fn decode(&self, action: usize) -> Result<Decoded> {
        let size = self.action_space_size();
        if action >= size {
            return Err(Error::ActionOutOfRange { action, size });
        }
        let n = self.cfg.n;
        let m = self.table.len();
        Ok(match self.cfg.game {
            Game::Linear => {
                let edge = self.table.pair(EdgeIndex(self.state.t))?;
                ((action == 1).then_some(edge), None)
            }
            Game::Local => {
                let i = self.state.agent_node.expect("local game tracks the agent");
                let j = action % n;
                ((action >= n).then_some((i.min(j), i.max(j))), Some(j))
            }
            Game::Global => {
                let edge = self.table.pair(EdgeIndex(action % m))?;
                ((action >= m).then_some(edge), None)
            }
            Game::Flip => (Some(self.table.pair(EdgeIndex(action))?), None),
        })
    }

    pub fn is_legal(&self, action: usize) -> bool {
        if self.state.done {
            return false;
        }
        match self.decode(action) {
            Ok((Some((i, j)), _)) => i != j || self.cfg.allow_self_loops,
            Ok((None, _)) => true,
            Err(_) => false,
        }
    }

    /// Actions that [`Env::step`] would accept right now.
    pub fn legal_actions(&self) -> Vec<usize> {
        (0..self.action_space_size()).filter(|&a| self.is_legal(a)).collect()
    }

    /// Applies `action`. A refused action leaves the state (clock included) untouched.
    pub fn step(&mut self, action: usize) -> Result<StepOutcome> {
        if self.state.done {
            return Err(Error::EpisodeFinished);
        }
        let (flip, agent) = self.decode(action)?;
        if let Some((i, j)) = flip {
            if i == j && !self.cfg.allow_self_loops {
                return Err(Error::SelfLoopNotAllowed { node: i });
            }
            self.state.graph.flip(i, j)?;
        }
        if agent.is_some() {
            self.state.agent_node = agent;
        }
        self.state.t += 1;
        let mut done = self.state.t >= self.horizon;
        let verdict = if self.cfg.check_every_step {
            let v = check_counterexample(&self.cfg.conjecture, &self.state.graph);
            done |= v.is_verified();
            if v != Verdict::None {
                self.state.counterexample = Some(v.clone());
            }
            Some(v)
        } else {
            None
        };
        let emitted = self.adapter.emit(&self.state.graph, done);
        self.state.done = done;
        Ok(StepOutcome {
            observation: self.observation(),
            reward: emitted.reward,
            done,
            flipped: flip,
            score: emitted.score,
            verdict,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewards::{edge_count_objective, wagner_conjecture_2_1, Comparison};
    use crate::invariants::EigenOptions;

    fn cfg(n: usize, game: Game) -> EnvConfig {
        EnvConfig::new(n, game, edge_count_objective(n).unwrap())
    }

    #[test]
    fn reset_defaults() {
        let env = Env::new(cfg(4, Game::Linear)).unwrap();
        assert_eq!(env.state().graph, Graph::complete(4, false).unwrap());
        assert_eq!(env.state().t, 0);
        assert_eq!(env.horizon(), 6);

        let env = Env::new(cfg(5, Game::Local).with_initial_graph(InitialGraph::Empty)).unwrap();
        assert_eq!(env.state().graph.edge_count(), 0);
        assert_eq!(env.state().agent_node, Some(0));

        let env = Env::new(cfg(4, Game::Flip).with_self_loops(true)).unwrap();
        assert_eq!(env.horizon(), 10);
    }

    #[test]
    fn invalid_configs() {
        assert!(Env::new(cfg(4, Game::Global).with_horizon(Some(0))).is_err());
        assert!(Env::new(cfg(1, Game::Linear)).is_err());
        assert!(Env::new(cfg(4, Game::Local).with_start_node(4)).is_err());
        assert!(Env::new(cfg(4, Game::Flip).with_initial_graph(InitialGraph::Graph6("Bw".into()))).is_err());
        // linear ignores a user horizon
        let env = Env::new(cfg(4, Game::Linear).with_horizon(Some(0))).unwrap();
        assert_eq!(env.horizon(), 6);
    }

    #[test]
    fn action_space_sizes() {
        assert_eq!(cfg(9, Game::Linear).action_space_size(), 2);
        assert_eq!(cfg(7, Game::Local).action_space_size(), 14);
        assert_eq!(cfg(4, Game::Global).action_space_size(), 12);
        assert_eq!(cfg(4, Game::Flip).action_space_size(), 6);
    }

    #[test]
    fn linear_builds_star() {
        let mut env = Env::new(cfg(4, Game::Linear).with_initial_graph(InitialGraph::Empty)).unwrap();
        let mut done = false;
        for a in [1, 1, 1, 0, 0, 0] {
            done = env.step(a).unwrap().done;
        }
        assert!(done);
        assert_eq!(env.state().graph, Graph::star(4).unwrap());
        assert_eq!(env.step(0), Err(Error::EpisodeFinished));
    }

    #[test]
    fn flip_twice_restores() {
        let mut env = Env::new(cfg(4, Game::Flip).with_initial_graph(InitialGraph::Empty)).unwrap();
        env.step(2).unwrap();
        assert!(env.state().graph.has_edge(0, 3));
        env.step(2).unwrap();
        assert_eq!(env.state().graph.edge_count(), 0);
    }

    #[test]
    fn local_move_and_flip() {
        let mut env = Env::new(cfg(4, Game::Local).with_initial_graph(InitialGraph::Empty)).unwrap();
        let out = env.step(4 + 2).unwrap();
        assert_eq!(env.state().agent_node, Some(2));
        assert_eq!(out.flipped, Some((0, 2)));
        assert!(env.state().graph.has_edge(0, 2));
        env.step(1).unwrap();
        assert_eq!(env.state().agent_node, Some(1));
        assert_eq!(env.state().graph.edge_count(), 1);
    }

    #[test]
    fn self_loop_refusal_keeps_state() {
        let mut env = Env::new(cfg(4, Game::Local)).unwrap();
        env.step(2).unwrap();
        let before = env.state().clone();
        assert_eq!(env.step(4 + 2), Err(Error::SelfLoopNotAllowed { node: 2 }));
        assert_eq!(env.state(), &before);
        assert!(!env.legal_actions().contains(&6));
        assert_eq!(env.legal_actions().len(), 7);
        // move to self without flipping is fine
        env.step(2).unwrap();

        let mut env = Env::new(cfg(4, Game::Local).with_self_loops(true)).unwrap();
        env.step(4).unwrap();
        assert!(env.state().graph.has_edge(0, 0));
    }

    #[test]
    fn legal_action_sets() {
        let env = Env::new(cfg(5, Game::Linear)).unwrap();
        assert_eq!(env.legal_actions(), vec![0, 1]);
        let env = Env::new(cfg(5, Game::Global)).unwrap();
        assert_eq!(env.legal_actions().len(), 20);
        let env = Env::new(cfg(5, Game::Global).with_self_loops(true)).unwrap();
        assert_eq!(env.legal_actions().len(), 30);
    }

    #[test]
    fn observation_layout() {
        let mut env = Env::new(cfg(3, Game::Local).with_initial_graph(InitialGraph::Empty)).unwrap();
        let obs = env.observation();
        assert_eq!(obs.len(), 3 + 3 + 3);
        assert_eq!(obs.to_dense(), vec![0., 0., 0., 1., 0., 0., 1., 0., 0.]);
        env.step(3 + 2).unwrap();
        assert_eq!(env.observation().to_dense(), vec![0., 1., 0., 0., 1., 0., 0., 0., 1.]);
        env.step(0).unwrap();
        let out = env.step(0).unwrap();
        assert!(out.done);
        assert_eq!(out.observation.clock, None);
        assert_eq!(out.observation.len(), env.config().observation_len());
    }

    #[test]
    fn incremental_total_is_terminal_score() {
        let mut env = Env::new(cfg(4, Game::Global).with_reward_mode(RewardMode::Incremental).with_horizon(Some(5))).unwrap();
        let mut total = 0.0;
        for a in [6, 7, 0, 8, 6] {
            total += env.step(a).unwrap().reward;
        }
        assert_eq!(total, env.current_score());
        assert_eq!(total, 4.0);
    }

    #[test]
    fn check_every_step_terminates_on_verified() {
        let positive = Conjecture::new("pos", Comparison::Weak, false, |g: &Graph, _, _: EigenOptions| {
            g.edge_count() as f64 - 5.5
        });
        let mut env = Env::new(EnvConfig::new(4, Game::Flip, positive).with_check_every_step(true)).unwrap();
        let first = env.step(0).unwrap();
        assert!(!first.done);
        assert_eq!(first.verdict, Some(Verdict::None));
        let second = env.step(0).unwrap();
        assert!(second.done);
        assert_eq!(env.state().t, 2);
        assert!(matches!(env.state().counterexample, Some(Verdict::Verified { .. })));
        assert_eq!(second.reward, 0.5);
    }

    #[test]
    fn wagner_linear_episode_from_complete() {
        let w = wagner_conjecture_2_1(5).unwrap();
        let mut env = Env::new(EnvConfig::new(5, Game::Linear, w.clone())).unwrap();
        let mut total = 0.0;
        for t in 0..10 {
            total += env.step(usize::from(t >= 4)).unwrap().reward;
        }
        assert_eq!(env.state().graph, Graph::star(5).unwrap());
        assert_eq!(total, w.score(&Graph::star(5).unwrap(), false));
    }

    #[test]
    fn game_names_parse() {
        assert_eq!("Flip".parse::<Game>().unwrap(), Game::Flip);
        assert_eq!("chess".parse::<Game>().unwrap_err().to_string(), "invalid configuration: unknown game");
    }
}
