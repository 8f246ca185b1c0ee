mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BoundsArgs, OracleArgs, SensitivityArgs, SimulateArgs};

/// Bounds and sensitivity analysis for causal effects under mixed
/// informative and non-informative censoring.
#[derive(Parser)]
#[command(name = "mixcens", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-fitted bound estimates from a data file.
    Bounds(BoundsArgs),
    /// Tipping point and δ-region for the bounded-risk model.
    Sensitivity(SensitivityArgs),
    /// Monte Carlo study on the simulation design.
    Simulate(SimulateArgs),
    /// Exact population values for a built-in population.
    Oracle(OracleArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input data. Exit 2.
    Config(String),
    /// Failure while estimating. Exit 3.
    Estimation(String),
    /// Failure writing results. Exit 3.
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Estimation(_) | CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Estimation(m) => write!(f, "estimation failed: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let args = config::expand(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Config(e.render().to_string().trim_end().trim_start_matches("error: ").to_string()));
        }
    };
    match cli.command {
        Command::Bounds(a) => commands::bounds(a),
        Command::Sensitivity(a) => commands::sensitivity(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Oracle(a) => commands::oracle(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mixcens: {e}");
            ExitCode::from(e.code())
        }
    }
}
