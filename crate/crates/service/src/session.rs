use std::time::Instant;

use graphgames_core::rewards::{check_counterexample, Registry};
use graphgames_core::{Env, EnvConfig, Error, Game, InitialGraph, RewardMode, Verdict};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast;

use crate::error::ApiError;

/// Largest node count a session may ask for.
pub const MAX_SESSION_NODES: usize = 64;

/// Body of a create-session request. Everything beyond `conjecture`, `game`
/// and `n` falls back to the environment defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionRequest {
    pub conjecture: String,
    pub game: String,
    pub n: usize,
    #[serde(default)]
    pub reward: Option<String>,
    #[serde(default)]
    pub normalize: bool,
    /// `empty`, `complete`, or `g6:<graph6 text>`.
    #[serde(default)]
    pub initial: Option<String>,
    #[serde(default)]
    pub self_loops: bool,
    #[serde(default)]
    pub check_every_step: bool,
    #[serde(default)]
    pub horizon: Option<usize>,
    #[serde(default)]
    pub start_node: Option<usize>,
    #[serde(default)]
    pub edge_order: Option<String>,
}

impl SessionRequest {
    pub fn new(conjecture: &str, game: &str, n: usize) -> Self {
        Self {
            conjecture: conjecture.into(),
            game: game.into(),
            n,
            reward: None,
            normalize: false,
            initial: None,
            self_loops: false,
            check_every_step: false,
            horizon: None,
            start_node: None,
            edge_order: None,
        }
    }

    /// Resolves names against `registry` and validates like the environment does.
    pub fn to_config(&self, registry: &Registry) -> Result<EnvConfig, Error> {
        let game: Game = self.game.parse()?;
        if self.n > MAX_SESSION_NODES {
            return Err(Error::InvalidNodeCount { got: self.n, max: MAX_SESSION_NODES });
        }
        let conjecture = registry.get(&self.conjecture, self.n)?;
        let mut cfg = EnvConfig::new(self.n, game, conjecture)
            .with_normalize(self.normalize)
            .with_self_loops(self.self_loops)
            .with_check_every_step(self.check_every_step)
            .with_horizon(self.horizon);
        if let Some(r) = &self.reward {
            cfg = cfg.with_reward_mode(r.parse()?);
        }
        if let Some(init) = &self.initial {
            cfg = cfg.with_initial_graph(parse_initial(init)?);
        }
        if let Some(node) = self.start_node {
            cfg = cfg.with_start_node(node);
        }
        if let Some(order) = &self.edge_order {
            cfg = cfg.with_edge_order(order.parse()?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_initial(text: &str) -> Result<InitialGraph, Error> {
    match text.trim() {
        "empty" => Ok(InitialGraph::Empty),
        "complete" => Ok(InitialGraph::Complete),
        other => match other.strip_prefix("g6:") {
            Some(g6) => Ok(InitialGraph::Graph6(g6.trim().to_string())),
            None => Err(Error::InvalidConfig(format!(
                "unknown initial graph {other:?} (expected empty, complete or g6:<text>)"
            ))),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSpace {
    pub size: usize,
    pub encoding: String,
}

fn action_space(cfg: &EnvConfig) -> ActionSpace {
    let size = cfg.action_space_size();
    let m = cfg.edge_slots();
    let encoding = match cfg.game {
        Game::Linear => "0 keeps the current edge, 1 flips it".to_string(),
        Game::Local => format!("k < {n}: move to node k; k >= {n}: move to node k - {n} and flip the edge", n = cfg.n),
        Game::Global => format!("k < {m}: pass; k >= {m}: flip edge k - {m}"),
        Game::Flip => "k: flip edge k".to_string(),
    };
    ActionSpace { size, encoding }
}

/// Everything a client needs to draw the board.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateView {
    pub session_id: String,
    pub conjecture: String,
    pub game: Game,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub t: usize,
    pub horizon: usize,
    /// f of the current graph.
    pub score: f64,
    /// f(G_0), …, f(G_t).
    pub scores: Vec<f64>,
    pub done: bool,
    pub agent_node: Option<usize>,
    /// Linear only: the edge the next action decides.
    pub current_edge: Option<[usize; 2]>,
    /// Slot order of edge indices used by Global and Flip actions.
    pub edge_slots: Vec<[usize; 2]>,
    pub action_space: ActionSpace,
    pub legal_actions: Vec<usize>,
    pub reward_mode: RewardMode,
    pub actions: Vec<usize>,
    pub counterexample: Option<Verdict>,
    /// Present once the episode is over or a counterexample was verified.
    pub g6: Option<String>,
}

/// Reply to a submitted action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionReply {
    pub reward: f64,
    pub score: f64,
    pub done: bool,
    pub flipped: Option<[usize; 2]>,
    pub counterexample: Option<Verdict>,
    pub view: StateView,
}

/// One live game plus the log needed to rebuild it.
#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub request: SessionRequest,
    config: EnvConfig,
    env: Env,
    actions: Vec<usize>,
    scores: Vec<f64>,
    counterexample: Option<Verdict>,
    pub created: Instant,
    pub last_active: Instant,
    pub events: broadcast::Sender<String>,
}

impl Session {
    pub fn new(id: String, request: SessionRequest, registry: &Registry) -> Result<Self, ApiError> {
        let config = request.to_config(registry)?;
        let env = Env::new(config.clone())?;
        let now = Instant::now();
        let (events, _) = broadcast::channel(64);
        let scores = vec![env.current_score()];
        Ok(Self { id, request, config, env, actions: Vec::new(), scores, counterexample: None, created: now, last_active: now, events })
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn touch(&mut self) {
        self.last_active = Instant::now();
    }

    fn refresh_counterexample(&mut self) {
        let state = self.env.state();
        self.counterexample = match &state.counterexample {
            Some(v) if v.is_verified() => Some(v.clone()),
            _ if state.done => Some(check_counterexample(&self.config.conjecture, &state.graph)).filter(Verdict::is_verified),
            _ => None,
        };
    }

    /// Steps the game. Errors leave the session exactly as it was.
    pub fn act(&mut self, action: usize) -> Result<ActionReply, ApiError> {
        self.touch();
        let out = self.env.step(action)?;
        self.actions.push(action);
        let score = self.env.current_score();
        self.scores.push(score);
        self.refresh_counterexample();
        let view = self.view();
        self.publish(&view);
        Ok(ActionReply {
            reward: out.reward,
            score,
            done: out.done,
            flipped: out.flipped.map(|(i, j)| [i, j]),
            counterexample: self.counterexample.clone(),
            view,
        })
    }

    /// Rebuilds the game from its configuration and every action but the last.
    pub fn undo(&mut self) -> Result<StateView, ApiError> {
        self.touch();
        let Some((_, kept)) = self.actions.split_last() else {
            return Err(ApiError::nothing_to_undo());
        };
        let kept = kept.to_vec();
        let mut env = Env::new(self.config.clone())?;
        let mut scores = vec![env.current_score()];
        for &a in &kept {
            env.step(a)?;
            scores.push(env.current_score());
        }
        self.env = env;
        self.actions = kept;
        self.scores = scores;
        self.refresh_counterexample();
        let view = self.view();
        self.publish(&view);
        Ok(view)
    }

    fn publish(&self, view: &StateView) {
        if let Ok(text) = serde_json::to_string(view) {
            // no subscribers is fine
            let _ = self.events.send(text);
        }
    }

    pub fn view(&self) -> StateView {
        let state = self.env.state();
        let table = self.env.edge_table();
        let current_edge = (self.config.game == graphgames_core::Game::Linear && !state.done)
            .then(|| table.pair(graphgames_core::EdgeIndex(state.t)).ok().map(|(i, j)| [i, j]))
            .flatten();
        let g6 = (state.done || self.counterexample.is_some())
            .then(|| state.graph.without_self_loops().to_g6().ok())
            .flatten();
        StateView {
            session_id: self.id.clone(),
            conjecture: self.config.conjecture.name().to_string(),
            game: self.config.game,
            n: self.config.n,
            edges: state.graph.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            t: state.t,
            horizon: self.env.horizon(),
            score: *self.scores.last().expect("initial score recorded"),
            scores: self.scores.clone(),
            done: state.done,
            agent_node: state.agent_node,
            current_edge,
            edge_slots: table.pairs().map(|(i, j)| [i, j]).collect(),
            action_space: action_space(&self.config),
            legal_actions: self.env.legal_actions(),
            reward_mode: self.config.reward_mode,
            actions: self.actions.clone(),
            counterexample: self.counterexample.clone(),
            g6,
        }
    }
}
