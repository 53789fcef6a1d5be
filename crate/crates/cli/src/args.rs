use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixquant::LloydOptions;

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "mixquant",
    version,
    about = "Optimal sets of n-means for the mixture ½·U[0,1] + ½·U[½,3/2]"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal codebook and quantization error for one n.
    Quantize(QuantizeArgs),
    /// One row per n: split, left-half codebook, error.
    Table(TableArgs),
    /// The starting sequence a(n) used to pick k.
    Sequence(SequenceArgs),
    /// Multi-restart Lloyd-Max on the mixture with any weight p.
    Oracle(OracleArgs),
    /// Compare closed-form results with the Lloyd oracle.
    Verify(VerifyArgs),
    /// Render the codepoints or the density as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Codepoints,
    Density,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleFlags {
    /// Lloyd restarts; restart 0 starts from equal-mass quantiles.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    /// Stop a run once no codepoint moves by this much.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, env = "MIXQUANT_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl OracleFlags {
    pub fn options(&self) -> LloydOptions {
        LloydOptions { restarts: self.restarts, tol: self.tol, seed: self.seed, ..LloydOptions::default() }
    }
}

/// Either `-n N` or `--from A --to B`.
#[derive(Debug, Args)]
pub struct NRange {
    #[arg(short = 'n', long = "n", conflicts_with_all = ["from", "to"])]
    pub n: Option<usize>,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
}

impl NRange {
    pub fn resolve(&self) -> Result<RangeInclusive<usize>> {
        let (from, to) = match (self.n, self.from, self.to) {
            (Some(n), _, _) => (n, n),
            (None, from, Some(to)) => (from.unwrap_or(1), to),
            (None, _, None) => return Err(CliError::Usage("give -n N or --to N".into())),
        };
        if from == 0 || from > to {
            return Err(CliError::Usage(format!("need 1 <= from <= to, got {from}..{to}")));
        }
        Ok(from..=to)
    }
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    /// Weight of U[0,1]; only n = 1 is available in closed form for p ≠ ½.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Recorded in the output metadata.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 1)]
    pub from: usize,
    #[arg(long)]
    pub to: usize,
    /// Add oracle_error and gap columns.
    #[arg(long)]
    pub with_oracle: bool,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub oracle: OracleFlags,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[command(flatten)]
    pub range: NRange,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[command(flatten)]
    pub oracle: OracleFlags,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub range: NRange,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub oracle: OracleFlags,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum, default_value_t = PlotKind::Codepoints)]
    pub kind: PlotKind,
    /// Largest n drawn by the codepoints plot.
    #[arg(short = 'n', long = "n", default_value_t = 9)]
    pub n: usize,
    /// Weight for the density plot.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// SVG destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn jobs_or_default(jobs: Option<usize>) -> Result<usize> {
    match jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => Ok(j),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}
