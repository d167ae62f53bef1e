use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

use crate::{io_error, CliError};

/// One record per run: enough to rerun it with `--config manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize, O: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: C,
    pub started_at: String,
    pub finished_at: String,
    pub outcome: O,
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl<C: Serialize, O: Serialize> RunManifest<C, O> {
    pub fn new(command: &'static str, seed: u64, config: C, started_at: String, outcome: O) -> Self {
        Self { command, version: env!("CARGO_PKG_VERSION"), seed, config, started_at, finished_at: now(), outcome }
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text + "\n").map_err(|e| io_error(path.display(), e))
    }
}
