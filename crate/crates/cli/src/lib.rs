//! Configuration-driven runner for the `mlock-core` models.
//!
//! A run reads a TOML file naming one experiment and its parameters,
//! validates the parameters against a per-experiment schema, runs the model
//! and writes tab-separated tables plus a `manifest.json` with checksums.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod preset;
pub mod run;
pub mod units;

pub use config::{resolve, schema, validate_config, Experiment, ExperimentConfig, Finding};
pub use error::CliError;
pub use run::{run_experiment, RunManifest, MANIFEST_FILE};
