use std::path::PathBuf;

use clap::{builder::PossibleValuesParser, Args, Parser, Subcommand, ValueEnum};
use toroid_core::certificate::Variant;
use toroid_core::execution::Uncertainty;
use toroid_core::rational::parse_rational;
use toroid_core::sim::algorithms::NAMES;

#[derive(Debug, Parser)]
#[command(
    name = "toroid",
    version,
    about = "Exact lower-bound toolkit for clock synchronization on k-ary m-toroids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a closed-form skew bound.
    Bound(BoundArgs),
    /// Generate or check a bound certificate.
    #[command(subcommand)]
    Cert(CertCommand),
    /// Search for the best certificate with an exact linear program.
    Lp(LpArgs),
    /// Run a synchronization algorithm and its shifted executions.
    Sim(SimArgs),
    /// Export per-edge delay tables as CSV.
    Figure(FigureArgs),
}

fn uncertainty(text: &str) -> Result<Uncertainty, String> {
    let value = parse_rational(text).map_err(|e| e.to_string())?;
    Uncertainty::new(value).map_err(|e| e.to_string())
}

fn variant(text: &str) -> Result<Variant, String> {
    text.parse().map_err(|e: toroid_core::Error| e.to_string())
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Processes per dimension.
    #[arg(long, value_parser = positive)]
    pub k: usize,
    /// Number of dimensions.
    #[arg(long, value_parser = positive, default_value = "1")]
    pub m: usize,
    /// Delay uncertainty, as an integer or `num/den`.
    #[arg(long, value_parser = uncertainty, default_value = "1")]
    pub u: Uncertainty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// toroid-odd, toroid-even, mesh or clique.
    #[arg(long, value_parser = variant)]
    pub variant: Variant,
    /// Processes per dimension (cube families).
    #[arg(long, value_parser = positive)]
    pub k: Option<usize>,
    /// Process count (clique).
    #[arg(long, value_parser = positive)]
    pub n: Option<usize>,
    #[arg(long, value_parser = positive, default_value = "1")]
    pub m: usize,
    #[arg(long, value_parser = uncertainty, default_value = "1")]
    pub u: Uncertainty,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
}

#[derive(Debug, Subcommand)]
pub enum CertCommand {
    /// Write the certificate for an odd toroid.
    Generate {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file from scratch.
    Check {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct LpArgs {
    #[command(flatten)]
    pub params: Params,
    /// JSON file with the pair cycle (defaults to the diagonal cycle).
    #[arg(long, conflicts_with = "enumerate")]
    pub cycle: Option<PathBuf>,
    /// Solve for every permutation cycle (tiny toroids only).
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["shift", "all_shifts"]))]
pub struct SimArgs {
    #[command(flatten)]
    pub params: Params,
    #[arg(long, value_parser = PossibleValuesParser::new(NAMES), default_value = "reference")]
    pub algorithm: String,
    /// Export the execution shifted by `x^i`.
    #[arg(long)]
    pub shift: Option<usize>,
    /// Run every shift and report the skew witness.
    #[arg(long)]
    pub all_shifts: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Alpha,
    Shifted(usize),
}

fn figure(text: &str) -> Result<Figure, String> {
    if text == "alpha" {
        return Ok(Figure::Alpha);
    }
    text.strip_prefix("shifted:")
        .and_then(|i| i.parse().ok())
        .map(Figure::Shifted)
        .ok_or_else(|| format!("expected `alpha` or `shifted:<i>`, got {text:?}"))
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// `alpha` or `shifted:<i>`.
    #[arg(long, value_parser = figure)]
    pub which: Figure,
    #[command(flatten)]
    pub params: Params,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
