use std::path::PathBuf;

use clap::Args;
use graphgames_core::dataset::{build_dataset, DatasetReport, DatasetSpec, Model};
use graphgames_core::g6;

use crate::manifest::{now, RunManifest};
use crate::{init_threads, io_error, CliError, EXIT_OK};
use serde::Serialize;

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct DatasetArgs {
    #[arg(long, default_value_t = 11)]
    pub n: usize,
    /// Comma-separated subset of er, ws, hog, ba.
    #[arg(long, default_value = "er,ws,hog,ba")]
    pub models: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// graph6 file of House of Graphs downloads: graphs on n nodes are used
    /// directly, smaller ones seed Barabási-Albert growth.
    #[arg(long, value_name = "FILE")]
    pub hog_seeds: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub er_per_p: usize,
    #[arg(long, default_value_t = 20)]
    pub ws_per_model: usize,
    #[arg(long, default_value_t = 1)]
    pub ba_per_seed: usize,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value = "dataset")]
    pub out: PathBuf,
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn parse_models(text: &str) -> Result<Vec<Model>, CliError> {
    let models = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Model>())
        .collect::<Result<Vec<_>, _>>()?;
    if models.is_empty() {
        return Err(CliError::Config("--models selects nothing".into()));
    }
    Ok(models)
}

pub fn run(args: DatasetArgs) -> Result<u8, CliError> {
    let started = now();
    let spec = DatasetSpec {
        n: args.n,
        models: parse_models(&args.models)?,
        er_per_p: args.er_per_p,
        ws_per_model: args.ws_per_model,
        ba_per_seed: args.ba_per_seed,
        seed: args.seed,
        ..DatasetSpec::default()
    };
    if spec.n == 0 || spec.n > graphgames_core::graph::MAX_NODES {
        return Err(CliError::Config(format!("--n must be in 1..={}", graphgames_core::graph::MAX_NODES)));
    }
    init_threads(args.threads)?;
    let hog = match &args.hog_seeds {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path.display(), e))?;
            let graphs = g6::decode_lines(&text)
                .map_err(|(line, e)| CliError::Parse(format!("{} line {line}: {e}", path.display())))?;
            Some(graphs)
        }
        None => None,
    };
    let report: DatasetReport = build_dataset(&spec, hog.as_deref(), &args.out).map_err(|e| match e {
        graphgames_core::Error::Io(m) => CliError::Io(format!("{}: {m}", args.out.display())),
        other => other.into(),
    })?;

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for (model, count) in &report.counts {
        println!("{model}\t{count}");
    }
    println!("total\t{}", report.total);
    println!(
        "wl-pairs\t{}\t({:.2}% of graphs in a colour-refinement-equivalent pair)",
        report.wl_pairs,
        100.0 * report.wl_duplicate_fraction
    );
    println!("graphs\t{}", report.files.graphs.display());
    println!("labels\t{}", report.files.labels.display());
    println!("wl-report\t{}", report.files.wl_report.display());
    RunManifest::new("dataset", args.seed, &args, started, &report).write(&args.out)?;
    Ok(EXIT_OK)
}
