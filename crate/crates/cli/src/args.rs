use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ruled_core::Format;

#[derive(Debug, Parser)]
#[command(name = "ruled", version, about = "Ruled surfaces swept along adapted frames of a space curve")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate T, N, B, κ, τ, θ, U, V along the base curve.
    Frames(JobArgs),
    /// Tessellate the surface and write a Wavefront OBJ mesh.
    Surface(JobArgs),
    /// Developability, special cases and base-curve invariants.
    Classify(JobArgs),
    /// Check closed forms against numerical oracles; exit 1 on any failure.
    Verify(JobArgs),
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// JSON job file.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output file, overriding the one named in the config.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Number of samples along the curve (overrides grid.n_s).
    #[arg(long, value_name = "N")]
    pub samples: Option<usize>,
    #[arg(long, value_name = "csv|json")]
    pub format: Option<Format>,
    #[arg(long = "tol-dev", value_name = "X")]
    pub tol_dev: Option<f64>,
}

impl Command {
    pub fn args(&self) -> &JobArgs {
        match self {
            Command::Frames(a) | Command::Surface(a) | Command::Classify(a) | Command::Verify(a) => a,
        }
    }
}
