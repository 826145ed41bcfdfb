//! Command-line front end for the double-well decoherence simulator.
//!
//! Exit codes: 0 success, 1 configuration/usage error, 2 numerical or
//! invariant failure during propagation.

mod commands;
mod config;
mod errors;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::sweep::Axis;
use config::{FormatName, ModelConfig};
use errors::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "qdwell", version, about = "Two-level double-well decoherence simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario configuration (JSON)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Override the random seed from the config
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Override the fixed integrator step
    #[arg(long, value_name = "REAL")]
    step: Option<f64>,

    /// Override the output formats (repeatable)
    #[arg(long, value_enum, value_name = "FMT")]
    format: Vec<CliFormat>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum CliFormat {
    Csv,
    Json,
    Svg,
}

impl From<CliFormat> for FormatName {
    fn from(f: CliFormat) -> Self {
        match f {
            CliFormat::Csv => FormatName::Csv,
            CliFormat::Json => FormatName::Json,
            CliFormat::Svg => FormatName::Svg,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Propagate every configured backend and write one CSV per backend
    Run(CommonArgs),
    /// Propagate the configured backends and report pairwise deviations
    Compare(CommonArgs),
    /// Vary one parameter axis and tabulate summary scalars
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Parameter to vary
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated axis values
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Solve the double-well spectrum and export the doublet map
    Doublewell {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of eigenlevels to export
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Run only the stochastic backend, with standard-error columns
    Trajectories(CommonArgs),
}

fn formats_override(args: &CommonArgs) -> Option<Vec<FormatName>> {
    if args.format.is_empty() {
        None
    } else {
        Some(args.format.iter().map(|f| FormatName::from(*f)).collect())
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = config::load_config(&args.config)?;
            let fmts = formats_override(&args);
            commands::run::execute(cfg, &args.out, args.seed, args.step, fmts)
        }
        Command::Compare(args) => {
            let cfg = config::load_config(&args.config)?;
            commands::compare::execute(cfg, &args.out, args.seed, args.step)
        }
        Command::Sweep { common, axis, values } => {
            let cfg = config::load_config(&common.config)?;
            commands::sweep::execute(cfg, &common.out, axis, &values)
        }
        Command::Doublewell { common, levels } => {
            let cfg = config::load_config(&common.config)?;
            let potential = match cfg.model {
                ModelConfig::Potential { potential } => potential,
                ModelConfig::Omega { .. } => {
                    return Err(CliError::Usage(
                        "the doublewell subcommand needs a potential-sourced model".into(),
                    ))
                }
            };
            commands::doublewell::execute(potential, &common.out, levels)
        }
        Command::Trajectories(args) => {
            let cfg = config::load_config(&args.config)?;
            let fmts = formats_override(&args);
            commands::trajectories::execute(cfg, &args.out, args.seed, fmts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
