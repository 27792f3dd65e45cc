//! Command-line driver for the heralded-cat library: builds conditional
//! states or detector-smeared mixtures and writes their distributions as
//! CSV/JSON tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "heralded-cat", version, about = "Conditional cat-like states from squeezed light")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fock amplitudes (state.csv) or the posterior mixture (mixture.json).
    State(config::Params),
    /// Photon-number distribution (photon_dist.csv).
    PhotonDist(config::Params),
    /// Quadrature distributions, one file per --phi.
    Quadrature(config::Params),
    /// Wigner function on the grid (wigner.csv).
    Wigner(config::Params),
    /// Husimi function on the grid (husimi.csv).
    Husimi(config::Params),
    /// One of the two components the state superposes.
    Component {
        #[command(flatten)]
        params: config::Params,
        /// Which component.
        #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
    },
    /// Coincidence priors and the posterior mixture for k coincidences.
    Detect(config::Params),
    /// Run the oracle cross-checks and write verify.json.
    Verify {
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Shift one check so the report shows a named failure.
        #[arg(long)]
        perturb: bool,
    },
}

/// Execute a parsed command line; returns the files written.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    use commands::*;
    match &cli.command {
        Command::State(p) => cmd_state(&config::resolve(p)?),
        Command::PhotonDist(p) => cmd_photon_dist(&config::resolve(p)?),
        Command::Quadrature(p) => cmd_quadrature(&config::resolve(p)?),
        Command::Wigner(p) => cmd_wigner(&config::resolve(p)?),
        Command::Husimi(p) => cmd_husimi(&config::resolve(p)?),
        Command::Component { params, sign } => {
            let s = if *sign == Sign::Plus { 1 } else { -1 };
            cmd_component(&config::resolve(params)?, s)
        }
        Command::Detect(p) => cmd_detect(&config::resolve(p)?),
        Command::Verify { out, perturb } => {
            let (path, report) = cmd_verify(out, *perturb)?;
            for c in &report.checks {
                println!(
                    "{} {} residual={:.3e} tol={:.1e}",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.tolerance
                );
            }
            if report.passed {
                Ok(vec![path])
            } else {
                eprintln!("report written to {}", path.display());
                Err(CliError::VerificationFailed(report.failures))
            }
        }
    }
}
