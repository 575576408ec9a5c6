//! Command-line surface.

use std::path::PathBuf;

use calogero_core::oracle::DEFAULT_SEED;
use calogero_core::TableSource;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::numbers::{parse_bounds, parse_list, parse_number, parse_points, Bounds, NumList, PointList};

#[derive(Debug, Parser)]
#[command(name = "calogero", version, about = "Exact propagator of the quantum Calogero model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Three-body kernel over the u-v plane: CSV, one graymap per channel, and a sidecar.
    Grid(GridArgs),
    /// Run a verification suite and write a JSON report; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Solve the coefficient table of F_N with the exact oracle.
    Solve(SolveArgs),
    /// Evolve a wave packet by quadrature and write sampled values.
    Evolve(EvolveArgs),
    /// Eigenfunction Psi_N(x; p) at one point.
    Psi(PsiArgs),
    /// Propagator K_N(x, y; t) at one point.
    Kernel(KernelArgs),
}

pub fn parse_table(text: &str) -> Result<TableSource, String> {
    Ok(match text {
        "auto" => TableSource::Auto,
        "closed-form" => TableSource::ClosedForm,
        "conjecture" => TableSource::Conjecture,
        "oracle" => TableSource::Oracle,
        "" => return Err("empty table source".into()),
        path => TableSource::File(PathBuf::from(path)),
    })
}

fn parse_count(text: &str) -> Result<usize, String> {
    text.parse::<usize>().map_err(|_| format!("{text:?} is not a non-negative integer"))
}

/// Particle number, coupling and trap frequency.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of particles.
    #[arg(long = "N", value_parser = parse_count)]
    pub n: usize,
    /// Coupling l in l(l+1)/(x_i - x_j)^2.
    #[arg(long)]
    pub ell: u32,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long = "N", default_value = "3", value_parser = parse_count)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub ell: u32,
    #[arg(long, default_value = "1", value_parser = parse_number, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value = "pi/16", value_parser = parse_number, allow_hyphen_values = true)]
    pub t: f64,
    /// Source positions y_1,y_2,y_3.
    #[arg(long, default_value = "-1,0,1", value_parser = parse_list, allow_hyphen_values = true)]
    pub y: NumList,
    /// Range of both u and v.
    #[arg(long, default_value = "-4,4", value_parser = parse_bounds, allow_hyphen_values = true)]
    pub bounds: Bounds,
    /// Nodes per axis.
    #[arg(long, default_value = "256", value_parser = parse_count)]
    pub res: usize,
    /// auto, closed-form, conjecture, oracle, or a table file.
    #[arg(long, default_value = "auto", value_parser = parse_table)]
    pub table: TableSource,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// File name stem inside the output directory.
    #[arg(long, default_value = "kernel")]
    pub stem: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    pub suite: String,
    #[arg(long = "N", value_parser = parse_count)]
    pub n: Option<usize>,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long, default_value = "1", value_parser = parse_number, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random points per case.
    #[arg(long, default_value = "20", value_parser = parse_count)]
    pub samples: usize,
    #[arg(long, default_value = "auto", value_parser = parse_table)]
    pub table: TableSource,
    /// Report path; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// Products of two-body polynomials F_k.
    Product,
    /// Laurent monomials in the pair variables.
    Laurent,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "product")]
    pub basis: Basis,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sample points; defaults to 125% of the unknowns.
    #[arg(long, value_parser = parse_count)]
    pub samples: Option<usize>,
    /// Table path; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PacketKind {
    /// Product of Gaussians.
    Gaussian,
    /// Harmonic oscillator eigenstates.
    Oscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExchangeArg {
    /// The model's own sector: symmetric for odd l, antisymmetric for even l.
    Auto,
    Symmetric,
    Antisymmetric,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Through the eigenfunction.
    General,
    /// Antisymmetrized Mehler product; l = 0 only.
    L0,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long = "N", default_value = "2", value_parser = parse_count)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    #[arg(long, default_value = "1", value_parser = parse_number, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value = "0.3", value_parser = parse_number, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub packet: PacketKind,
    /// Gaussian centres; evenly spaced on [-3, 3] by default.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub centres: Option<NumList>,
    /// Gaussian widths; 1 by default.
    #[arg(long, value_parser = parse_list)]
    pub widths: Option<NumList>,
    /// Gaussian wavenumbers; 0 by default.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub momenta: Option<NumList>,
    /// Oscillator levels; 0,1,..,N-1 by default.
    #[arg(long, value_parser = parse_list)]
    pub levels: Option<NumList>,
    #[arg(long, value_enum, default_value = "auto")]
    pub exchange: ExchangeArg,
    #[arg(long, value_enum, default_value = "general")]
    pub route: Route,
    /// Output configurations `x1,x2;x1,x2;...`. For N = 2 the default is a square grid.
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
    pub x: Option<PointList>,
    /// Range of the default N = 2 output grid.
    #[arg(long, default_value = "-6,6", value_parser = parse_bounds, allow_hyphen_values = true)]
    pub bounds: Bounds,
    /// Nodes per axis of the default N = 2 output grid.
    #[arg(long, default_value = "25", value_parser = parse_count)]
    pub res: usize,
    /// Multiplies the automatic quadrature cell count on every axis.
    #[arg(long, default_value = "1", value_parser = parse_count)]
    pub refine: usize,
    /// Relative Richardson estimate above which a convergence warning is printed.
    #[arg(long, default_value = "1e-3", value_parser = parse_number)]
    pub tolerance: f64,
    #[arg(long, default_value = "auto", value_parser = parse_table)]
    pub table: TableSource,
    /// Skip the norm-drift integral.
    #[arg(long)]
    pub skip_norm: bool,
    /// CSV path.
    #[arg(long, default_value = "evolve.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PsiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub x: NumList,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub p: NumList,
    #[arg(long, default_value = "auto", value_parser = parse_table)]
    pub table: TableSource,
    /// CSV path; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "1", value_parser = parse_number, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub x: NumList,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub y: NumList,
    #[arg(long, value_enum, default_value = "general")]
    pub route: Route,
    #[arg(long, default_value = "auto", value_parser = parse_table)]
    pub table: TableSource,
    /// CSV path; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
