//! Cross-entropy method over episodes of a graph game.
//!
//! Each iteration samples a batch of episodes from the current policy, pools
//! them with the super sessions kept from the previous iteration, fits the
//! policy to the (observation, action) pairs of the elite fraction, and keeps
//! the top super fraction for the next round.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mlp::{Policy, Sample};
use super::results::ResultsFile;
use super::{derive_seed, rollout, EpisodeTrace};
use crate::env::EnvConfig;
use crate::error::{Error, Result};
use crate::rewards::{check_counterexample, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CeConfig {
    pub episodes_per_iteration: usize,
    pub elite_fraction: f64,
    /// Share of each batch carried into the next iteration's pool.
    pub super_fraction: f64,
    pub learning_rate: f64,
    /// Minibatch size of the single gradient-descent pass per iteration.
    pub batch_size: usize,
    pub iterations: usize,
    pub hidden: Vec<usize>,
    pub seed: u64,
    pub stop_on_counterexample: bool,
}

impl Default for CeConfig {
    fn default() -> Self {
        Self {
            episodes_per_iteration: 200,
            elite_fraction: 0.1,
            super_fraction: 0.03,
            learning_rate: 1e-3,
            batch_size: 32,
            iterations: 500,
            hidden: vec![128, 64],
            seed: 0,
            stop_on_counterexample: true,
        }
    }
}

impl CeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.episodes_per_iteration < 2 {
            return bad("episodes per iteration must be at least 2");
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction <= 1.0) {
            return bad("elite fraction must lie in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.super_fraction) {
            return bad("super fraction must lie in [0, 1]");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        Ok(())
    }
}

/// A verified counterexample and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub conjecture: String,
    pub n: usize,
    pub g6: String,
    pub score: f64,
    pub iteration: usize,
    pub seed: u64,
}

/// Progress after one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub iteration: usize,
    pub best_score: f64,
    pub batch_best: f64,
    pub batch_mean: f64,
    /// Lowest score admitted to the elite.
    pub elite_threshold: f64,
    pub elite_size: usize,
    pub pool_size: usize,
    pub loss: f64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone)]
pub struct CeOutcome {
    pub best: EpisodeTrace,
    /// Best score seen after each iteration; non-decreasing.
    pub history: Vec<f64>,
    pub counterexample: Option<Counterexample>,
    pub policy: Policy,
}

/// Number of episodes kept out of `pool` for a fraction `f`, at least one when `f > 0`.
fn keep_count(f: f64, pool: usize) -> usize {
    if f <= 0.0 {
        0
    } else {
        ((f * pool as f64).ceil() as usize).clamp(1, pool)
    }
}

/// Orders by score, best first; among equal scores the newer episode (lower pool position) wins.
fn rank(pool: &mut [EpisodeTrace]) {
    pool.sort_by(|a, b| b.total_reward.total_cmp(&a.total_reward));
}

/// Dense observation, chosen action and legal-action mask.
type FitRow<'a> = (Vec<f64>, usize, Option<&'a [bool]>);

fn fit(policy: &mut Policy, elite: &[EpisodeTrace], cfg: &CeConfig, rng: &mut ChaCha8Rng) -> f64 {
    let inputs: Vec<FitRow<'_>> = elite
        .iter()
        .flat_map(|t| {
            t.observations
                .iter()
                .zip(&t.actions)
                .zip(&t.masks)
                .map(|((o, &a), m)| (o.to_dense(), a, m.as_deref()))
        })
        .collect();
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    order.shuffle(rng);
    let mut total = 0.0;
    for chunk in order.chunks(cfg.batch_size) {
        let batch: Vec<Sample<'_>> = chunk
            .iter()
            .map(|&i| Sample { input: &inputs[i].0, action: inputs[i].1, mask: inputs[i].2 })
            .collect();
        let (loss, grads) = policy.loss_and_gradients(&batch);
        policy.apply(&grads, cfg.learning_rate);
        total += loss * batch.len() as f64;
    }
    total / inputs.len().max(1) as f64
}

/// Runs the cross-entropy method on `env`.
///
/// Every verified counterexample is appended to `results` as soon as it is
/// found. `on_iteration` sees each iteration's report.
pub fn ce_train(
    cfg: &CeConfig,
    env: &EnvConfig,
    results: Option<&ResultsFile>,
    mut on_iteration: impl FnMut(&IterationReport),
) -> Result<CeOutcome> {
    cfg.validate()?;
    env.validate()?;
    let mut init_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, u64::MAX, 0));
    let mut policy = Policy::new(env.observation_len(), &cfg.hidden, env.action_space_size(), &mut init_rng);
    let mut supers: Vec<EpisodeTrace> = Vec::new();
    let mut best: Option<EpisodeTrace> = None;
    let mut history = Vec::with_capacity(cfg.iterations);
    let mut found: Option<Counterexample> = None;
    let mut seen = HashSet::new();

    for iteration in 0..cfg.iterations {
        let batch: Vec<EpisodeTrace> = (0..cfg.episodes_per_iteration as u64)
            .into_par_iter()
            .map(|i| rollout(&policy, env, derive_seed(cfg.seed, iteration as u64 + 1, i)))
            .collect::<Result<_>>()?;

        let batch_mean = batch.iter().map(|t| t.total_reward).sum::<f64>() / batch.len() as f64;
        let batch_best = batch.iter().map(|t| t.total_reward).fold(f64::NEG_INFINITY, f64::max);

        // counterexample check on every fresh terminal graph that could cross
        let mut new_found = None;
        for trace in &batch {
            let verdict = match &trace.verdict {
                Some(v @ Verdict::Verified { .. }) => v.clone(),
                _ if trace.total_reward > -1e-6 => check_counterexample(&env.conjecture, &trace.terminal),
                _ => Verdict::None,
            };
            if let Verdict::Verified { score, g6 } = verdict {
                if !seen.insert(g6.clone()) {
                    continue;
                }
                let cx = Counterexample {
                    conjecture: env.conjecture.name().to_string(),
                    n: env.n,
                    g6,
                    score,
                    iteration,
                    seed: cfg.seed,
                };
                if let Some(file) = results {
                    file.append(&cx.conjecture, cx.n, &cx.g6, cx.score, cx.seed)
                        .map_err(|e| Error::Io(format!("cannot write results file: {e}")))?;
                }
                if new_found.is_none() {
                    new_found = Some(cx.clone());
                }
                found.get_or_insert(cx);
            }
        }

        let mut pool = batch;
        pool.append(&mut supers);
        rank(&mut pool);
        if best.as_ref().is_none_or(|b| pool[0].total_reward > b.total_reward) {
            best = Some(pool[0].clone());
        }
        let best_score = best.as_ref().expect("set above").total_reward;
        history.push(best_score);

        let pool_size = pool.len();
        let elite_len = keep_count(cfg.elite_fraction, pool_size);
        let elite_threshold = pool[elite_len - 1].total_reward;
        let mut fit_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, iteration as u64 + 1, u64::MAX));
        let loss = fit(&mut policy, &pool[..elite_len], cfg, &mut fit_rng);

        let super_len = keep_count(cfg.super_fraction, cfg.episodes_per_iteration).min(pool.len());
        pool.truncate(super_len);
        supers = pool;

        on_iteration(&IterationReport {
            iteration,
            best_score,
            batch_best,
            batch_mean,
            elite_threshold,
            elite_size: elite_len,
            pool_size,
            loss,
            counterexample: new_found.clone(),
        });
        if new_found.is_some() && cfg.stop_on_counterexample {
            break;
        }
    }

    let best = match best {
        Some(b) => b,
        None => rollout(&policy, env, derive_seed(cfg.seed, 0, 0))?,
    };
    Ok(CeOutcome { best, history, counterexample: found, policy })
}
