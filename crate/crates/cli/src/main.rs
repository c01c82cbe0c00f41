mod commands;
mod config;
mod failure;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualsvd_core::waves::{DerivativeScheme, StandingSpec, TravelingSpec};
use serde::Serialize;

use crate::config::Tolerances;
use crate::failure::Failure;

/// Compact dual SVD, low-rank approximation and Moore-Penrose inverse of
/// dual matrices, and standing/traveling wave detection in spatiotemporal
/// data.
///
/// A dual matrix A_s + A_i ε is stored as two CSV files,
/// `<name>.standard.csv` and `<name>.infinitesimal.csv`, one matrix row per
/// line. Entries are real (`1.5`) or complex (`1.5-2i`). Numeric results go to
/// files and JSON reports; a short summary is printed on standard output.
///
/// Exit codes: 0 success, 1 usage error or unusable input, 2 no compact dual
/// SVD exists (the existence residual is printed), 3 I/O error.
///
/// The environment variable DUALSVD_THREADS caps the worker threads
/// (0 or unset = one per core).
#[derive(Parser, Debug)]
#[command(name = "dualsvd", version, about, long_about, term_width = 80)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    tolerances: Tolerances,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compact dual SVD A = U Σ V*; writes U, Sigma, V and cdsvd.json into a directory
    Cdsvd(CdsvdArgs),

    /// Rank-k approximation that is optimal under the dual quasi-metric
    Lowrank(LowrankArgs),

    /// Dual Moore-Penrose generalized inverse
    Pinv(PinvArgs),

    /// Synthesize Gaussian standing and traveling waves on a pixel grid
    Simulate(SimulateArgs),

    /// Wave analysis of spatiotemporal data
    #[command(subcommand)]
    Waves(WavesCommand),
}

#[derive(Subcommand, Debug)]
enum WavesCommand {
    /// Classify the leading components into standing and traveling waves
    Detect(DetectArgs),

    /// Estimate the number of signal components from the infinitesimal singular values
    Rank(RankArgs),
}

#[derive(Args, Debug, Serialize)]
struct CdsvdArgs {
    /// Input container: a directory holding one container, the shared
    /// prefix, or either of its two files
    #[arg(long)]
    input: PathBuf,

    /// Output directory (created if missing)
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct LowrankArgs {
    /// Input container
    #[arg(long)]
    input: PathBuf,

    /// Target rank, at least 1 and at most the rank of the standard part
    #[arg(short = 'k', long = "rank")]
    k: usize,

    /// Output container prefix; the report goes to `<prefix>.json`
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct PinvArgs {
    /// Input container
    #[arg(long)]
    input: PathBuf,

    /// Output container prefix; the report goes to `<prefix>.json`
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    /// Pixel grid as HxW; pixel (r, c) becomes data row r*W + c
    #[arg(long, value_parser = parse::grid)]
    grid: (usize, usize),

    /// Standing wave `row,col,sigma,omega,weight` (repeatable)
    #[arg(long, value_parser = parse::standing)]
    standing: Vec<StandingSpec>,

    /// Traveling wave `row1,col1,row2,col2,sigma,omega,weight` (repeatable)
    #[arg(long, value_parser = parse::traveling)]
    traveling: Vec<TravelingSpec>,

    /// Number of time samples
    #[arg(long)]
    frames: usize,

    /// Time step between samples
    #[arg(long, default_value_t = 1.0)]
    dt: f64,

    /// Growth rate shared by all waves (negative values decay)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gamma: f64,

    /// Add white Gaussian noise with ‖signal‖²/‖noise‖² equal to this ratio
    #[arg(long)]
    noise_snr: Option<f64>,

    /// A path ending in `.csv` receives the raw series (one row per pixel);
    /// anything else is a container prefix for the dual matrix built with
    /// `--derive`. A JSON report with the ground truth goes next to it.
    #[arg(long)]
    output: PathBuf,

    /// Time-derivative scheme for container output: first-diff or one-sided-2nd
    #[arg(long, default_value_t = DerivativeScheme::FirstDiff)]
    derive: DerivativeScheme,
}

#[derive(Args, Debug, Serialize)]
struct SeriesInput {
    /// Raw CSV series (rows are sites, columns are time samples) or a container
    #[arg(long)]
    input: PathBuf,

    /// Derivative scheme applied to a raw series: first-diff or one-sided-2nd
    #[arg(long, default_value_t = DerivativeScheme::FirstDiff)]
    derive: DerivativeScheme,

    /// Time step of a raw series
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
}

#[derive(Args, Debug, Serialize)]
struct DetectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    series: SeriesInput,

    /// Number of leading components to analyse (default: all)
    #[arg(short = 'K', long = "components")]
    k: Option<usize>,

    /// Pixel grid HxW used to report peaks (default: one column per site)
    #[arg(long, value_parser = parse::grid)]
    grid: Option<(usize, usize)>,

    /// JSON report path
    #[arg(long)]
    report: PathBuf,

    /// Component pair `x,y` (0-based) whose movie to write
    #[arg(long, value_parser = parse::pair, requires = "movie")]
    extract_pair: Option<(usize, usize)>,

    /// Movie output prefix; the frames go to `<prefix>.csv`
    #[arg(long, requires = "extract_pair")]
    movie: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RankArgs {
    #[command(flatten)]
    #[serde(flatten)]
    series: SeriesInput,

    /// JSON report path
    #[arg(long)]
    report: PathBuf,

    /// Known rank, echoed into the report for comparison
    #[arg(long)]
    true_rank: Option<usize>,

    /// Gap denominators are clamped to this fraction of the largest value
    #[arg(long, default_value_t = 1e-3)]
    floor: f64,

    /// Gap ratios below this report rank 0 with low confidence
    #[arg(long, default_value_t = 1.25)]
    significance: f64,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            failure.report();
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli, argv: &[String]) -> Result<(), Failure> {
    config::init_threads()?;
    cli.tolerances.validate()?;
    let t = &cli.tolerances;
    match &cli.command {
        Command::Cdsvd(a) => commands::cdsvd(a, &t.record("cdsvd", argv, a)?),
        Command::Lowrank(a) => commands::lowrank(a, &t.record("lowrank", argv, a)?),
        Command::Pinv(a) => commands::pinv(a, &t.record("pinv", argv, a)?),
        Command::Simulate(a) => commands::simulate(a, &t.record("simulate", argv, a)?),
        Command::Waves(WavesCommand::Detect(a)) => commands::detect(a, &t.record("waves detect", argv, a)?),
        Command::Waves(WavesCommand::Rank(a)) => commands::rank(a, &t.record("waves rank", argv, a)?),
    }
}
