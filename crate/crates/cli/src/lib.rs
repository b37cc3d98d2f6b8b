//! Command-line front end for `caputo-sirs`: JSON configuration, CSV
//! trajectories, JSON reports and SVG plots.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "caputo-sirs", version, about = "Caputo fractional SIRS model: analysis, simulation and sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibria, local and global stability; writes report.json.
    Analyze {
        #[arg(long)]
        config: PathBuf,
    },
    /// One run; writes trajectory.csv (and run_report.json / trajectory.svg).
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Also plot S, I, R against t.
        #[arg(long)]
        svg: bool,
    },
    /// One run per order; per-order CSVs, summary.json and an I(t) overlay.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated orders, e.g. 0.85,0.9,0.95,1.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        alphas: Vec<f64>,
    },
    /// Re-runs a published figure across α ∈ {0.85, 0.9, 0.95, 1}.
    Reproduce {
        #[arg(long, value_enum)]
        figure: commands::Figure,
        /// Output directory (default: $CAPUTO_SIRS_OUT, then ./out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn execute(cli: &Cli) -> CliResult<commands::Outcome> {
    match &cli.command {
        Command::Analyze { config } => commands::analyze(&config::RunConfig::load(config)?),
        Command::Simulate { config, svg } => {
            commands::simulate(&config::RunConfig::load(config)?, *svg)
        }
        Command::Sweep { config, alphas } => {
            commands::sweep_cmd(&config::RunConfig::load(config)?, alphas)
        }
        Command::Reproduce { figure, out } => commands::reproduce(*figure, out.as_deref()),
    }
}
