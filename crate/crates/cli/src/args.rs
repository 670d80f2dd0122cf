use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "singular-weyl",
    version,
    about = "K-finite solutions of the Schrödinger and heat equations with inverse-square potential"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List admissible eigenvalues up to --lambda-max, or the λ-admissible
    /// pairs of --lambda.
    Admissible(Common),
    /// List the K-types F_{m,l,k} of the lattice.
    Ktypes(Common),
    /// Check every closed form against the numeric and exact oracles.
    Verify(Common),
    /// Per-λ decomposition and composition series.
    Structure(Common),
    /// Data for external plotting.
    PlotData(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Schrodinger,
    Heat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Level curves λ = l(2l + 2k + n - 2) in the (l, k) plane (CSV).
    Levels,
    /// K-types of the given eigenvalues with their η± edges.
    Lattice,
    /// E_j⁺ edges between the λ = 0 family and the admissible eigenvalues.
    Heisenberg,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Dimension of the spatial variable.
    #[arg(long)]
    pub n: u32,
    /// Parity parameter, taken mod 4.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub q: i64,
    /// Complex parameter s, written `re+imi` (e.g. `0+0.5i`).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    pub s: Option<String>,
    /// Named value of s [default: schrodinger].
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub lambda: Option<i64>,
    #[arg(long)]
    pub lambda_max: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m_max: Option<i64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for the sample points; SINGULAR_WEYL_SEED takes precedence.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_contiguous: Option<f64>,
    #[arg(long)]
    pub tol_pde: Option<f64>,
    #[arg(long)]
    pub tol_ladder: Option<f64>,
    #[arg(long)]
    pub tol_heisenberg: Option<f64>,
    #[arg(long)]
    pub tol_periodicity: Option<f64>,
    #[arg(long)]
    pub tol_group: Option<f64>,
    #[arg(long)]
    pub tol_picture: Option<f64>,
    #[arg(long)]
    pub tol_rational: Option<f64>,
    /// Base finite-difference step for first derivatives.
    #[arg(long)]
    pub tol_fd_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    /// Points per level curve.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}
