use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use graphgames_core::rewards::{check_counterexample, Registry};
use graphgames_core::search::{ce_train, format_score, random_search, CeConfig, ResultsFile};
use graphgames_core::{EnvConfig, Game, InitialGraph, Verdict};
use serde::Serialize;

use crate::manifest::{now, RunManifest};
use crate::{init_threads, io_error, CliError, EXIT_COUNTEREXAMPLE, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Ce,
    Random,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SearchArgs {
    /// Number of nodes.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "wagner21")]
    pub conjecture: String,
    /// linear, local, global or flip.
    #[arg(long, default_value = "linear")]
    pub game: String,
    #[arg(long, value_enum, default_value = "ce")]
    pub algo: Algo,
    /// Episodes per iteration (ce, default 200) or in total (random, default 1000).
    #[arg(long)]
    pub episodes: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,
    /// Elite fraction.
    #[arg(long, default_value_t = 0.1)]
    pub elite: f64,
    /// Fraction of each batch carried over to the next iteration.
    #[arg(long = "super", default_value_t = 0.03)]
    #[serde(rename = "super")]
    pub super_fraction: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    /// Hidden layer widths, comma separated.
    #[arg(long, default_value = "128,64")]
    pub hidden: String,
    /// sparse or incremental.
    #[arg(long, default_value = "sparse")]
    pub reward: String,
    #[arg(long)]
    pub normalize: bool,
    /// empty, complete or g6:PATH.
    #[arg(long, default_value = "complete")]
    pub initial: String,
    #[arg(long)]
    pub self_loops: bool,
    #[arg(long)]
    pub check_every_step: bool,
    /// Episode length for local, global and flip.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Starting node of the local game.
    #[arg(long, default_value_t = 0)]
    pub start_node: usize,
    /// linear or clique.
    #[arg(long, default_value = "linear")]
    pub edge_order: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory for the manifest and counterexamples.tsv.
    #[arg(long, default_value = "graphgames-out")]
    pub out: PathBuf,
    /// Keep searching after a verified counterexample.
    #[arg(long)]
    pub keep_going: bool,
    /// Only print the summary.
    #[arg(long)]
    pub quiet: bool,
    /// key = value file (or an earlier manifest.json) supplying defaults for these flags.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SearchOutcome {
    best_score: f64,
    best_g6: String,
    iterations_run: usize,
    counterexample: Option<Verdict>,
}

fn parse_initial(text: &str) -> Result<InitialGraph, CliError> {
    match text {
        "empty" => Ok(InitialGraph::Empty),
        "complete" => Ok(InitialGraph::Complete),
        other => {
            let path = other
                .strip_prefix("g6:")
                .ok_or_else(|| CliError::Config(format!("--initial must be empty, complete or g6:PATH, got {other:?}")))?;
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| CliError::Parse(format!("{path}: no graph6 line")))?;
            graphgames_core::g6::decode(line).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
            Ok(InitialGraph::Graph6(line.to_string()))
        }
    }
}

fn parse_hidden(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&w| w > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Config(format!("--hidden must be comma-separated positive widths, got {text:?}")))
}

impl SearchArgs {
    fn env_config(&self) -> Result<EnvConfig, CliError> {
        let game: Game = self.game.parse()?;
        let conjecture = Registry::builtin().get(&self.conjecture, self.n)?;
        let cfg = EnvConfig::new(self.n, game, conjecture)
            .with_reward_mode(self.reward.parse()?)
            .with_normalize(self.normalize)
            .with_initial_graph(parse_initial(&self.initial)?)
            .with_self_loops(self.self_loops)
            .with_check_every_step(self.check_every_step)
            .with_horizon(self.horizon)
            .with_start_node(self.start_node)
            .with_edge_order(self.edge_order.parse()?);
        cfg.validate()?;
        Ok(cfg)
    }

    fn ce_config(&self) -> Result<CeConfig, CliError> {
        let cfg = CeConfig {
            episodes_per_iteration: self.episodes.unwrap_or(CeConfig::default().episodes_per_iteration),
            elite_fraction: self.elite,
            super_fraction: self.super_fraction,
            learning_rate: self.lr,
            batch_size: self.batch_size,
            iterations: self.iterations,
            hidden: parse_hidden(&self.hidden)?,
            seed: self.seed,
            stop_on_counterexample: !self.keep_going,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn prepare_out(dir: &Path) -> Result<ResultsFile, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir.display(), e))?;
    Ok(ResultsFile::new(dir.join("counterexamples.tsv")))
}

pub fn run(args: SearchArgs) -> Result<u8, CliError> {
    let started = now();
    let env = args.env_config()?;
    init_threads(args.threads)?;
    let results = prepare_out(&args.out)?;
    let conj_name = env.conjecture.name().to_string();

    let outcome = match args.algo {
        Algo::Ce => {
            let cfg = args.ce_config()?;
            if !args.quiet {
                println!("iteration\tbest\tbatch_best\tbatch_mean\telite_threshold\tloss");
            }
            let quiet = args.quiet;
            let out = ce_train(&cfg, &env, Some(&results), |r| {
                if !quiet {
                    println!(
                        "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
                        r.iteration, r.best_score, r.batch_best, r.batch_mean, r.elite_threshold, r.loss
                    );
                }
            })?;
            let counterexample = out
                .counterexample
                .as_ref()
                .map(|c| Verdict::Verified { score: c.score, g6: c.g6.clone() });
            SearchOutcome {
                best_score: out.best.total_reward,
                best_g6: out.best.terminal.without_self_loops().to_g6()?,
                iterations_run: out.history.len(),
                counterexample,
            }
        }
        Algo::Random => {
            let episodes = args.episodes.unwrap_or(1000);
            let best = random_search(&env, episodes, args.seed)?;
            let verdict = check_counterexample(&env.conjecture, &best.terminal);
            let counterexample = match verdict {
                Verdict::Verified { score, ref g6 } => {
                    results
                        .append(&conj_name, env.n, g6, score, args.seed)
                        .map_err(|e| io_error(results.path().display(), e))?;
                    Some(verdict)
                }
                _ => None,
            };
            SearchOutcome {
                best_score: best.total_reward,
                best_g6: best.terminal.without_self_loops().to_g6()?,
                iterations_run: 0,
                counterexample,
            }
        }
    };

    println!("best score {} graph6 {}", format_score(outcome.best_score), outcome.best_g6);
    if let Some(Verdict::Verified { score, g6 }) = &outcome.counterexample {
        println!("counterexample {conj_name} n={} score {} graph6 {g6}", env.n, format_score(*score));
    }
    let found = outcome.counterexample.is_some();
    RunManifest::new("search", args.seed, &args, started, outcome).write(&args.out)?;
    Ok(if found { EXIT_COUNTEREXAMPLE } else { EXIT_OK })
}
