use std::io::Read;
use std::path::PathBuf;

use clap::Args;
use graphgames_core::dataset::{format_eigenvalue, format_label};
use graphgames_core::invariants::{adjacency_spectral_radius, laplacian_spectrum, max_matching};
use graphgames_core::rewards::Registry;
use graphgames_core::{g6, Graph};
use serde::Serialize;

use crate::manifest::{now, RunManifest};
use crate::{io_error, CliError, EXIT_OK};

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct InvariantsArgs {
    /// graph6 file, one graph per line; `-` or absent reads stdin.
    pub input: Option<PathBuf>,
    /// Only score this conjecture (repeatable); default: every registered one.
    #[arg(long)]
    pub conjecture: Vec<String>,
    /// Divide conjecture scores by n where the conjecture allows it.
    #[arg(long)]
    pub normalize: bool,
    /// Directory for a run manifest; nothing is written without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct InvariantsOutcome {
    graphs: usize,
}

fn read_input(input: &Option<PathBuf>) -> Result<String, CliError> {
    match input {
        Some(path) if path.as_os_str() != "-" => {
            std::fs::read_to_string(path).map_err(|e| io_error(path.display(), e))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| io_error("stdin", e))?;
            Ok(text)
        }
    }
}

/// One tab-separated row; conjectures undefined at this n print `NA`.
fn row(index: usize, g: &Graph, registry: &Registry, names: &[String], normalize: bool) -> Result<String, CliError> {
    let spectrum = laplacian_spectrum(g)?;
    let mut cols = vec![
        index.to_string(),
        g.to_g6()?,
        g.n().to_string(),
        g.edge_count().to_string(),
        g.is_connected().to_string(),
        format_eigenvalue(adjacency_spectral_radius(g)),
        max_matching(g).size.to_string(),
        format_label(&spectrum),
    ];
    for name in names {
        cols.push(match registry.get(name, g.n()) {
            Ok(c) => format_eigenvalue(c.score(g, normalize)),
            Err(_) => "NA".into(),
        });
    }
    Ok(cols.join("\t"))
}

pub fn run(args: InvariantsArgs) -> Result<u8, CliError> {
    let started = now();
    let registry = Registry::builtin();
    let names: Vec<String> = if args.conjecture.is_empty() {
        registry.list().map(|(n, _)| n.to_string()).collect()
    } else {
        for name in &args.conjecture {
            if !registry.list().any(|(n, _)| n == name) {
                return Err(CliError::Config(format!("unknown conjecture {name:?}")));
            }
        }
        args.conjecture.clone()
    };
    let text = read_input(&args.input)?;
    let graphs = g6::decode_lines(&text).map_err(|(line, e)| CliError::Parse(format!("line {line}: {e}")))?;

    let mut header = vec!["index", "g6", "n", "edges", "connected", "lambda1", "mu", "laplacian"];
    header.extend(names.iter().map(String::as_str));
    println!("{}", header.join("\t"));
    for (i, g) in graphs.iter().enumerate() {
        println!("{}", row(i, g, &registry, &names, args.normalize)?);
    }

    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir.display(), e))?;
        RunManifest::new("invariants", 0, &args, started, InvariantsOutcome { graphs: graphs.len() }).write(dir)?;
    }
    Ok(EXIT_OK)
}
