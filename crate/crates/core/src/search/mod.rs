//! Counterexample search: episode rollouts, uniform random search and the cross-entropy method.

mod ce;
mod mlp;
mod results;

pub use ce::{ce_train, CeConfig, CeOutcome, Counterexample, IterationReport};
pub use mlp::{masked_softmax, Gradients, Layer, Policy, Sample};
pub use results::{format_score, ResultsFile};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::env::{Env, EnvConfig, Observation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rewards::Verdict;

/// Anything that maps an observation to a distribution over actions.
pub trait ActionModel: Sync {
    fn action_probabilities(&self, obs: &Observation, mask: Option<&[bool]>) -> Vec<f64>;
}

impl ActionModel for Policy {
    fn action_probabilities(&self, obs: &Observation, mask: Option<&[bool]>) -> Vec<f64> {
        self.probabilities(&obs.to_dense(), mask)
    }
}

/// Uniform over legal actions.
#[derive(Debug, Clone, Copy)]
pub struct UniformPolicy {
    pub actions: usize,
}

impl ActionModel for UniformPolicy {
    fn action_probabilities(&self, _: &Observation, mask: Option<&[bool]>) -> Vec<f64> {
        masked_softmax(&vec![0.0; self.actions], mask)
    }
}

/// One played episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub observations: Vec<Observation>,
    pub actions: Vec<usize>,
    pub rewards: Vec<f64>,
    /// Legal-action mask per step; `None` when every action was legal.
    pub masks: Vec<Option<Vec<bool>>>,
    pub terminal: Graph,
    /// Sum of emitted rewards, which equals the terminal score.
    pub total_reward: f64,
    /// Last counterexample verdict raised during the episode (check-every-step mode).
    pub verdict: Option<Verdict>,
}

impl EpisodeTrace {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

/// Derives an independent stream seed from a master seed and two counters.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(seed) ^ a) ^ b.rotate_left(32))
}

fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Plays `env` from a fresh reset to the end, sampling actions from `model`.
pub fn rollout_env(model: &dyn ActionModel, env: &mut Env, rng: &mut impl Rng) -> Result<EpisodeTrace> {
    let size = env.action_space_size();
    let probe = model.action_probabilities(&env.observation(), None);
    if probe.len() != size {
        return Err(Error::InvalidConfig(format!(
            "policy has {} outputs but the game has {size} actions",
            probe.len()
        )));
    }
    let mut obs = env.reset();
    let mut trace = EpisodeTrace {
        observations: Vec::with_capacity(env.horizon()),
        actions: Vec::with_capacity(env.horizon()),
        rewards: Vec::with_capacity(env.horizon()),
        masks: Vec::with_capacity(env.horizon()),
        terminal: env.state().graph.clone(),
        total_reward: 0.0,
        verdict: None,
    };
    while !env.state().done {
        let mask: Vec<bool> = (0..size).map(|a| env.is_legal(a)).collect();
        let mask = (!mask.iter().all(|&b| b)).then_some(mask);
        let probs = model.action_probabilities(&obs, mask.as_deref());
        let action = sample_index(&probs, rng);
        let out = env.step(action)?;
        trace.observations.push(std::mem::replace(&mut obs, out.observation));
        trace.actions.push(action);
        trace.rewards.push(out.reward);
        trace.masks.push(mask);
        trace.total_reward += out.reward;
        if let Some(v) = out.verdict.filter(|v| *v != Verdict::None) {
            trace.verdict = Some(v);
        }
    }
    trace.terminal = env.state().graph.clone();
    Ok(trace)
}

/// One episode with its own seeded stream.
pub fn rollout(model: &dyn ActionModel, cfg: &EnvConfig, seed: u64) -> Result<EpisodeTrace> {
    let mut env = Env::new(cfg.clone())?;
    rollout_env(model, &mut env, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Plays `episodes` uniform-random episodes and keeps the best (earliest on ties).
///
/// Episode `i` uses stream `derive_seed(seed, 0, i)`, so a longer run sees
/// every episode of a shorter one.
pub fn random_search(cfg: &EnvConfig, episodes: usize, seed: u64) -> Result<EpisodeTrace> {
    if episodes == 0 {
        return Err(Error::InvalidConfig("random search needs at least one episode".into()));
    }
    let model = UniformPolicy { actions: cfg.action_space_size() };
    let traces: Vec<EpisodeTrace> = (0..episodes as u64)
        .into_par_iter()
        .map(|i| rollout(&model, cfg, derive_seed(seed, 0, i)))
        .collect::<Result<_>>()?;
    Ok(traces
        .into_iter()
        .reduce(|best, t| if t.total_reward > best.total_reward { t } else { best })
        .expect("at least one episode"))
}
