//! Command-line front end for `chirp-qkd`.

// `!(x > y)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "chirp-qkd",
    version,
    about = "Key rates and secure distances for BB84 with chirped Gaussian pulses in dispersive fiber"
)]
pub struct Cli {
    /// Flat `key = value` config file; `#` starts a comment.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Override one config key; repeatable, applied after the file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Output CSV (sweep, optimize-chirp) or output directory (reproduce).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output SVG chart (sweep, optimize-chirp).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every intermediate quantity at one distance.
    Point {
        /// Channel length in km.
        #[arg(long, default_value_t = 0.0)]
        distance: f64,
    },
    /// Key rate over a distance grid, as CSV.
    Sweep,
    /// Maximum secure distance in km.
    Lmax,
    /// Scan the chirp grid for the longest secure distance.
    OptimizeChirp,
    /// Regenerate the data and chart of one figure.
    Reproduce {
        /// fig1, fig2, fig3a, fig3b, fig4a or fig4b.
        figure: String,
    },
    /// Print the effective configuration in config-file form.
    ShowConfig,
}

/// Defaults, then the config file, then `--set`, then `--out`/`--svg`.
pub fn load_config(cli: &Cli) -> Result<Config> {
    let mut config = Config::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        config.apply_text(&text, &path.display().to_string())?;
    }
    for arg in &cli.set {
        config.apply_override(arg)?;
    }
    if !matches!(cli.command, Command::Reproduce { .. }) {
        if let Some(out) = &cli.out {
            config.out_csv = Some(out.clone());
        }
    }
    if let Some(svg) = &cli.svg {
        config.out_svg = Some(svg.clone());
    }
    config.validate()?;
    Ok(config)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::Point { distance } => commands::point(&config, *distance, out),
        Command::Sweep => commands::sweep(&config, out),
        Command::Lmax => commands::lmax(&config, out),
        Command::OptimizeChirp => commands::optimize_chirp(&config, out),
        Command::Reproduce { figure } => {
            let scenario = figure.parse::<chirp_qkd::analysis::Scenario>()?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            commands::reproduce(&config, scenario, &dir, out)
        }
        Command::ShowConfig => commands::show_config(&config, out),
    }
}
