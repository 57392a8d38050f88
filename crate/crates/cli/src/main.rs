use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mlock_cli::preset::reference_config;
use mlock_cli::{run_experiment, validate_config, CliError, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "mlock", version, about = "Run mode-locking and optomechanics experiments from TOML files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its tables and manifest.
    Run {
        config: PathBuf,
        /// Overrides the seed in the file.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the output directory in the file.
        #[arg(long, env = "MLOCK_OUTPUT_DIR")]
        out: Option<PathBuf>,
    },
    /// Check a configuration and list every problem.
    Validate { config: PathBuf },
    /// Print a reference configuration.
    Preset {
        #[arg(value_parser = ["paper"])]
        name: String,
        #[arg(long, default_value = "mml")]
        experiment: String,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, seed, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            let manifest = run_experiment(&cfg)?;
            for o in &manifest.outputs {
                println!("{}\t{}\t{} rows", cfg.output_dir.join(&o.file).display(), o.sha256, o.rows);
            }
            println!("{}", serde_json::to_string_pretty(&manifest.summary).expect("summary serializes"));
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let findings = validate_config(&cfg);
            if findings.is_empty() {
                println!("{}: valid {} configuration", config.display(), cfg.experiment);
                Ok(())
            } else {
                Err(CliError::Validation(findings))
            }
        }
        Command::Preset { experiment, .. } => {
            let e: Experiment = experiment.parse().map_err(|m: String| CliError::Parse(m))?;
            let text = reference_config(e)
                .ok_or_else(|| CliError::Parse(format!("no reference configuration for '{e}' (try mml or adler)")))?;
            print!("{text}");
            Ok(())
        }
    }
}
