//! `trimotion`: reduce, map, solve and check planar and three-body
//! Hamiltonians from a JSON run configuration.
//!
//! Exit status: 0 on success, 2 for configuration or validation errors,
//! 3 when a numerical solve does not converge, 1 for failed checks and
//! I/O errors.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod custom;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_grid, Command, LoadedConfig, Overrides};
use failure::Failure;
use output::Artifacts;

#[derive(Parser)]
#[command(
    name = "trimotion",
    version,
    about = "Planar and three-body spectra from a JSON run configuration"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Discretize the reduced problem and compute its lowest levels.
    Solve(RunArgs),
    /// Separated-variable levels of the reduced problem.
    Oracle(RunArgs),
    /// Map a three-body system to its planar problem (JSON).
    Map3(RunArgs),
    /// Run built-in identity and invariant checks.
    Verify(RunArgs),
    /// Degeneracy scan over k for a TTW-like family.
    Scan(RunArgs),
    /// Grid-refinement table with observed orders.
    Converge(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON).
    config: PathBuf,
    /// Number of levels, replacing solver.levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Nodes per axis as N or NX,NY, replacing discretization.n.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,
    /// Output directory, replacing output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(command: Command, args: &RunArgs) -> Result<Artifacts, Failure> {
    let overrides = Overrides {
        levels: args.levels,
        grid: args.grid,
        out: args.out.clone(),
    };
    let loaded = LoadedConfig::load(&args.config, command, &overrides)?;
    match command {
        Command::Solve => commands::solve(&loaded),
        Command::Oracle => commands::oracle(&loaded),
        Command::Map3 => commands::map3(&loaded),
        Command::Verify => commands::verify(&loaded),
        Command::Scan => commands::scan(&loaded),
        Command::Converge => commands::converge(&loaded),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Solve(a) => (Command::Solve, a),
        Sub::Oracle(a) => (Command::Oracle, a),
        Sub::Map3(a) => (Command::Map3, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Scan(a) => (Command::Scan, a),
        Sub::Converge(a) => (Command::Converge, a),
    };
    match run(command, args) {
        Ok(artifacts) => {
            for path in &artifacts.written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
