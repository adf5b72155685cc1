//! Command-line surface. Every command prints canonical JSON (sorted keys,
//! shortest round-trip floats) on stdout.
//!
//! Exit codes: 0 success, 1 a hard check failed, 2 usage or parse error,
//! 3 I/O error, 4 the eigenvalue oracle failed.

mod commands;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ensemble::EnsembleKind;
use crate::raster::{BoundingBox, DEFAULT_RESOLUTION};
use crate::regions::RegionKind;

pub use commands::{
    bench, cert, check, check_matrix, compute, digest, generate, plot, plot_grids, run_bench,
    AreaRatios, BenchAggregate, BenchSummary, CheckReport, EigenRow, TrialRecord,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    CheckFailed = 1,
    Usage = 2,
    Io = 3,
    Oracle = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Usage,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Io,
            message: message.into(),
        }
    }

    pub fn oracle(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Oracle,
            message: format!("oracle failed: {}", message.into()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            OracleLimit { .. } | ConstantPolynomial | IllConditioned { .. } => {
                CliError::oracle(e.to_string())
            }
            _ => CliError::usage(e.to_string()),
        }
    }
}

/// What a command produced: JSON for stdout and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub json: serde_json::Value,
    pub code: ExitCode,
}

/// Canonical JSON: keys sorted (serde_json's default map), two-space indent,
/// trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

#[derive(Debug, Parser)]
#[command(
    name = "eigloc",
    version,
    about = "Eigenvalue inclusion regions, figures and nonsingularity certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rasterize one inclusion set and report its area
    Compute(ComputeArgs),
    /// Draw layered regions with the oracle eigenvalues marked
    Plot(PlotArgs),
    /// Verify eigenvalue membership and the containment chain for one matrix
    Check(CheckArgs),
    /// Run the nonsingularity certificates
    Cert(CertArgs),
    /// Seeded ensemble statistics, including the Φ ⊆ Θ sweep
    Bench(BenchArgs),
    /// Print one ensemble matrix in the matrix file format
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Grid resolution (cells per side)
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub grid: usize,
    /// Bounding box override: remin,remax,immin,immax
    #[arg(long = "box", value_parser = parse_box, allow_hyphen_values = true)]
    pub bbox: Option<BoundingBox>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub set: RegionKind,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Also write the raw membership grid as a plain PBM file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    Svg,
    Ppm,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Layers bottom to top, comma separated
    #[arg(long, value_delimiter = ',', default_value = "brauer,phi")]
    pub layers: Vec<RegionKind>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ImageFormat::Svg)]
    pub format: ImageFormat,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Include wall-clock timings (makes the output run-dependent)
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertMethodArg {
    C1,
    C2,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub ensemble: Option<EnsembleKind>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CertArgs {
    /// Matrix file; alternatively certify an ensemble with --ensemble
    #[arg(long, conflicts_with = "ensemble")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CertMethodArg::Both)]
    pub method: CertMethodArg,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub ensemble: EnsembleKind,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Trial index within the seeded run
    #[arg(long, default_value_t = 0)]
    pub trial: usize,
}

pub fn parse_box(s: &str) -> Result<BoundingBox, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c, d] => BoundingBox::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!(
            "expected 4 comma-separated numbers, got {}",
            parts.len()
        )),
    }
}

/// Runs a parsed command. Files named by `--out` are written here.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Compute(args) => compute(args),
        Command::Plot(args) => plot(args),
        Command::Check(args) => check(args),
        Command::Cert(args) => cert(args),
        Command::Bench(args) => bench(args),
        Command::Gen(args) => generate(args),
    }
}
