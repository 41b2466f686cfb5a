//! Flag definitions. Every flag is optional at this level so that values can
//! fall back to the config file; required-ness is checked after merging.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "charged-drop",
    version,
    about = "Charged liquid drops with discrete charges: two-charge minimizers, many-charge configurations, regime maps",
    after_help = "Lists are comma separated, e.g. --eps 1e-2,5e-3,2e-3. Flags override values from --config."
)]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for output files (overridden by CHARGED_DROP_OUT).
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Data format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG plot where the command has one.
    #[arg(long, global = true, value_enum)]
    pub plot: Option<PlotMode>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotMode {
    None,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-charge minimizers.
    #[command(subcommand)]
    Two(TwoCommand),
    /// Many-charge configurations in a ball.
    #[command(subcommand)]
    Charges(ChargesCommand),
    /// Existence regimes.
    #[command(subcommand)]
    Regime(RegimeCommand),
    /// Dimensionless parameters from physical lengths.
    Nondim(NondimArgs),
}

#[derive(Debug, Subcommand)]
pub enum TwoCommand {
    /// Minimize the two-charge energy at one (ε, γ).
    Solve(SolveArgs),
    /// Solve on a grid of (ε, γ).
    Sweep(SweepArgs),
    /// Existence threshold γ_c(ε) for a list of ε.
    Boundary(BoundaryArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Also write the minimizer's profile with this many samples.
    #[arg(long, value_name = "N")]
    pub profile: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub gamma: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub eps: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum ChargesCommand {
    /// Minimize the Coulomb energy of n charges in a ball.
    Optimize(OptimizeArgs),
    /// Uniformity statistics of optimized configurations for a list of n.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
pub struct ChargeOptions {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Host ball radius.
    #[arg(long = "R", visible_alias = "radius", allow_negative_numbers = true)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Projected-gradient tolerance.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub opts: ChargeOptions,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub opts: ChargeOptions,
    /// Width of the boundary shell counted by shell_fraction.
    #[arg(long, allow_negative_numbers = true)]
    pub shell_delta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum RegimeCommand {
    /// Classify a grid of (ε, γ, n).
    Map(MapArgs),
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub n: Vec<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub c_threshold: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NondimArgs {
    /// Solvation radius.
    #[arg(long, allow_negative_numbers = true)]
    pub r0: Option<f64>,
    /// Capillary length.
    #[arg(long, allow_negative_numbers = true)]
    pub rsigma: Option<f64>,
    /// Bjerrum length.
    #[arg(long, allow_negative_numbers = true)]
    pub rb: Option<f64>,
}
