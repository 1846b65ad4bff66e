//! Command-line experiment runner for `fockdyn`.
//!
//! Exit status: 0 on success, 2 for a bad configuration or invocation, 3
//! when a computation fails or misses its tolerance.

mod artifacts;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(name = "fockdyn", version, about = "Norms and operator dynamics on weighted Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monomial norms by closed form, asymptotics and quadrature.
    Norms(RunArgs),
    /// Closed-form classification of the configured operator on each cell.
    Classify(RunArgs),
    /// Numerical probes and their cross-check against the classification.
    Probe(RunArgs),
    /// Aggregate the artifacts already written to a directory.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads, 0 for one per core.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// Config whose `out` directory is aggregated.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(anyhow::Error),
    Compute(anyhow::Error),
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig, Failure> {
        let overrides = Overrides { out: self.out.clone(), nmax: self.nmax, tol: self.tol, jobs: self.jobs };
        ExperimentConfig::load(&self.config, &overrides).map_err(Failure::Config)
    }

    fn load_with_operator(&self) -> Result<ExperimentConfig, Failure> {
        let cfg = self.load()?;
        cfg.require_operator().map_err(Failure::Config)?;
        Ok(cfg)
    }
}

/// Errors raised while validating inputs are config errors; anything after
/// that is computational.
fn run(cli: Cli) -> Result<commands::Outcome, Failure> {
    let is_config = |e: &anyhow::Error| {
        e.downcast_ref::<fockdyn::Error>()
            .is_some_and(|e| matches!(e, fockdyn::Error::InvalidArgument(_) | fockdyn::Error::InvalidSpace(_)))
    };
    let classify_err = |e: anyhow::Error| if is_config(&e) { Failure::Config(e) } else { Failure::Compute(e) };
    match cli.command {
        Command::Norms(a) => commands::norms(&a.load()?).map_err(Failure::Compute),
        Command::Classify(a) => commands::classify_cmd(&a.load_with_operator()?).map_err(classify_err),
        Command::Probe(a) => commands::probe(&a.load_with_operator()?).map_err(classify_err),
        Command::Report(a) => {
            let dir = match (a.out, a.config) {
                (Some(out), _) => out,
                (None, Some(path)) => {
                    ExperimentConfig::load(&path, &Overrides::default()).map_err(Failure::Config)?.out
                }
                (None, None) => return Err(Failure::Config(anyhow::anyhow!("report needs --out or --config"))),
            };
            commands::report(&dir).map_err(Failure::Config)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
