use serde::Serialize;
use serde_json::Value;

use crate::config::{resolve, ExperimentConfig, Resolved};
use crate::error::CliError;
use crate::experiments::execute;
use crate::output::{write_atomic, write_table, OutputRecord};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub config: ExperimentConfig,
    /// Parameters in SI units with defaults filled in.
    pub resolved: Resolved,
    pub outputs: Vec<OutputRecord>,
    pub summary: Value,
}

/// Validates `config`, runs its experiment and writes every table and the
/// manifest into `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let resolved = resolve(config).map_err(CliError::Validation)?;
    let outcome = execute(config.experiment, &resolved, config.seed)?;
    let dir = &config.output_dir;
    let outputs = outcome
        .tables
        .iter()
        .map(|t| write_table(dir, t))
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        config: config.clone(),
        resolved,
        outputs,
        summary: outcome.summary,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_atomic(dir, MANIFEST_FILE, text.as_bytes())?;
    Ok(manifest)
}
