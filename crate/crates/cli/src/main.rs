//! `gwalk`: walk configurations in, figure-ready CSV/JSON out.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use commands::{CoinSweepConfig, DistributionOptions, SweepKind};
use config::{CoinConfig, EngineChoice, OutputFormat, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl From<gwalk_core::Error> for CliError {
    fn from(e: gwalk_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "gwalk",
    version,
    about = "Driven Gaussian quantum walk simulator",
    long_about = "Simulates quantum walks on a cycle whose coin is a beam splitter, a pumped\n\
                  two-mode squeezer, or a composition of both, and evaluates squeezing,\n\
                  entanglement, photon statistics, noise, and position distributions."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep single-coin properties over the squeezing parameter or angle
    Coin(CoinArgs),
    /// Evaluate walk observables over a list of times
    Walk(WalkArgs),
    /// Emit the position distribution per time step
    Distribution(DistributionArgs),
    /// Run the numerical cross-check suite
    Verify,
}

#[derive(Args)]
struct CoinArgs {
    /// Coin family to sweep
    #[arg(long, value_enum, default_value = "pdc")]
    kind: SweepKind,
    /// First parameter value (xi for pdc, theta for bs)
    #[arg(long)]
    start: f64,
    /// Last parameter value
    #[arg(long)]
    end: f64,
    /// Number of sample points
    #[arg(long, default_value_t = 31)]
    points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct WalkArgs {
    /// JSON run configuration; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of positions on the cycle
    #[arg(long)]
    d: Option<usize>,
    /// Squeezer coin with this squeezing parameter
    #[arg(long, conflicts_with = "theta")]
    xi: Option<f64>,
    /// Beam-splitter coin with this rotation angle
    #[arg(long)]
    theta: Option<f64>,
    /// Shorthand for integer times 0..=t_max
    #[arg(long, conflicts_with = "t_values")]
    t_max: Option<u64>,
    /// Comma-separated list of (possibly fractional) times
    #[arg(long, value_delimiter = ',')]
    t_values: Option<Vec<f64>>,
    /// Input amplitudes `x,c,re,im[;...]` or `vacuum`
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_enum)]
    engine: Option<EngineChoice>,
    /// Comma-separated observable columns (default: all)
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<String>>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistributionArgs {
    #[command(flatten)]
    walk: WalkArgs,
    /// Emit the classical random-walk reference instead of the quantum walk
    #[arg(long)]
    classical: bool,
    /// Forward-step probability of the classical reference
    #[arg(long, default_value_t = 0.5)]
    p_forward: f64,
    /// Use the coherent signal |beta|^2 only, without the noise background
    #[arg(long)]
    coherent_only: bool,
    /// Emit per-mode amplitudes and photon means instead of P(x)
    #[arg(long)]
    amplitudes: bool,
}

impl WalkArgs {
    fn build_config(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => Some(RunConfig::from_file(path)?),
            None => None,
        };

        let d = self
            .d
            .or(base.as_ref().map(|c| c.d))
            .ok_or_else(|| CliError::Config("d: set --d or provide a config file".into()))?;

        let coin = if let Some(xi) = self.xi {
            CoinConfig::Pdc { xi }
        } else if let Some(theta) = self.theta {
            CoinConfig::Bs { theta }
        } else if let Some(cfg) = &base {
            cfg.coin.clone()
        } else {
            return Err(CliError::Config(
                "coin: set --xi or --theta, or provide a config file".into(),
            ));
        };

        let t_values = if let Some(values) = &self.t_values {
            values.clone()
        } else if let Some(t_max) = self.t_max {
            (0..=t_max).map(|t| t as f64).collect()
        } else {
            base.as_ref().map(|c| c.t_values.clone()).unwrap_or_default()
        };

        let input = match &self.input {
            Some(text) => config::parse_input_flag(text)?,
            None => base.as_ref().map(|c| c.input.clone()).unwrap_or_default(),
        };

        Ok(RunConfig {
            d,
            coin,
            t_values,
            input,
            engine: self
                .engine
                .or(base.as_ref().map(|c| c.engine))
                .unwrap_or_default(),
            outputs: self
                .outputs
                .clone()
                .or(base.as_ref().map(|c| c.outputs.clone()))
                .unwrap_or_default(),
            format: self
                .format
                .or(base.as_ref().map(|c| c.format))
                .unwrap_or_default(),
        })
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coin(args) => {
            let sweep = CoinSweepConfig {
                kind: args.kind,
                start: args.start,
                end: args.end,
                points: args.points,
            };
            let text = commands::run_coin(&sweep, args.format)?;
            emit(&text, &args.out)
        }
        Command::Walk(args) => {
            let cfg = args.build_config()?;
            let text = commands::run_walk(&cfg)?;
            emit(&text, &args.out)
        }
        Command::Distribution(args) => {
            let cfg = args.walk.build_config()?;
            let opts = DistributionOptions {
                classical: args.classical,
                p_forward: args.p_forward,
                coherent_only: args.coherent_only,
                amplitudes: args.amplitudes,
            };
            let text = commands::run_distribution(&cfg, &opts)?;
            emit(&text, &args.walk.out)
        }
        Command::Verify => {
            let (report, passed) = commands::run_verify();
            print!("{report}");
            if passed {
                Ok(())
            } else {
                Err(CliError::Numerical("cross-check suite failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(message)) => {
            eprintln!("configuration error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(message)) => {
            eprintln!("numerical failure: {message}");
            ExitCode::from(2)
        }
    }
}
