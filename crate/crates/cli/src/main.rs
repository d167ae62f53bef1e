//! `graphgames`: counterexample search, graph invariants, dataset building and the play server.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 graph6 parse error, 4 I/O error,
//! 10 verified counterexample found.

mod config;
mod dataset;
mod invariants;
mod manifest;
mod search;
mod serve;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_COUNTEREXAMPLE: u8 = 10;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Parse(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Parse(m) | CliError::Io(m) => m,
        }
    }
}

impl From<graphgames_core::Error> for CliError {
    fn from(e: graphgames_core::Error) -> Self {
        use graphgames_core::Error;
        match e {
            Error::Graph6(_) => CliError::Parse(e.to_string()),
            Error::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

pub fn io_error(context: impl std::fmt::Display, e: std::io::Error) -> CliError {
    CliError::Io(format!("{context}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "graphgames", version, about = "Graph-building games for hunting counterexamples to graph conjectures")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a counterexample with the cross-entropy method or random play.
    Search(search::SearchArgs),
    /// Print invariants and conjecture scores for graph6 input.
    Invariants(invariants::InvariantsArgs),
    /// Build the Laplacian-spectrum labelled dataset.
    Dataset(dataset::DatasetArgs),
    /// Serve the interactive play API.
    Serve(serve::ServeArgs),
}

/// Splices `--config FILE` contents in front of the explicit flags.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let sub_pos = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|p| p + 1);
    let Some(sub_pos) = sub_pos else { return Ok(args) };
    let sub = args[sub_pos].to_string_lossy().into_owned();
    let mut rest = args[sub_pos + 1..].to_vec();
    let Some(path) = config::take_config_flag(&mut rest)? else { return Ok(args) };
    let pairs = config::load(std::path::Path::new(&path))?;
    let mut out = args[..=sub_pos].to_vec();
    out.extend(config::to_flags(&Cli::command(), &sub, &pairs)?);
    out.extend(rest);
    Ok(out)
}

pub fn init_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Search(args) => search::run(args),
        Command::Invariants(args) => invariants::run(args),
        Command::Dataset(args) => dataset::run(args),
        Command::Serve(args) => serve::run(args),
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
