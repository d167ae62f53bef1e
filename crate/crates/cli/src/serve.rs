use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::time::Duration;

use clap::Args;
use graphgames_service::{serve, ServiceConfig};
use serde::Serialize;

use crate::{io_error, CliError, EXIT_OK};

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ServeArgs {
    #[arg(long, env = "GRAPHGAMES_BIND", default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, env = "GRAPHGAMES_PORT", default_value_t = 8080)]
    pub port: u16,
    /// Seconds a session may sit idle before it is dropped.
    #[arg(long, default_value_t = 3600)]
    pub idle_timeout: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub fn run(args: ServeArgs) -> Result<u8, CliError> {
    let mut rt = tokio::runtime::Builder::new_multi_thread();
    if let Some(t) = args.threads {
        rt.worker_threads(t.max(1));
    }
    let rt = rt.enable_all().build().map_err(|e| io_error("runtime", e))?;
    let addr = SocketAddr::new(args.bind, args.port);
    let config = ServiceConfig { idle_timeout: Duration::from_secs(args.idle_timeout) };
    eprintln!("serving on http://{addr}");
    rt.block_on(serve(addr, config)).map_err(|e| io_error(addr, e))?;
    Ok(EXIT_OK)
}
