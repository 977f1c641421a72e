//! `freeprob`: batch front end for the exact two-state free Brownian motion
//! toolkit. Every subcommand prints one table (CSV or JSON lines) and exits
//! 0 on success, 1 if an exact identity fails, 2 on a usage error.

mod commands;
mod report;
mod selfcheck;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freeprob::scalar::parse_rational;
use freeprob::spectral::MeasureKind;
use freeprob::Rational;
use num_traits::Signed;

use report::{Format, Report};

/// Environment variable capping every enumeration size (cell counts, moment
/// orders, depths).
pub const MAX_N_VAR: &str = "FREEPROB_MAX_N";
const DEFAULT_MAX_N: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "freeprob", version, about = "Exact moment, cumulant and Fock-space checks for two-state free Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; tables default to CSV, `generator-check` to JSON lines
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cumulants and moments of X(T) in both states
    Moments(MomentsArgs),
    /// Jacobi parameters of ν_t and μ_t, read off their moments
    Jacobi(JacobiArgs),
    /// Sampled density of ν_t, μ_t or the law of C_T, plus the atom
    Density(DensityArgs),
    /// φ and ψ_T moments of X(T) in the Fock model
    FockMoments(FockArgs),
    /// Two-state freeness of centered increments on alternating words
    FreenessCheck(FreenessArgs),
    /// Martingale property of Q_n(X(t), t) on the grid
    MartingaleCheck(MartingaleArgs),
    /// φ[(Σ X_i^k)²] against its N → ∞ limit
    VariationTable(VariationArgs),
    /// 2n-norms of the k-variation
    NormTable(NormArgs),
    /// ∂_t Q_n + A_t Q_n = 0
    GeneratorCheck(GeneratorArgs),
    /// ‖C_t η_D‖ for the truncated kernel vector
    KernelResidual(KernelArgs),
    /// Cross-module oracle suite
    Selfcheck(SelfcheckArgs),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<Rational, String> {
    let q = rational(s)?;
    if q.is_positive() {
        Ok(q)
    } else {
        Err(format!("must be positive, got {q}"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected an integer ≥ 1, got {s:?}")),
    }
}

#[derive(Args, Debug)]
pub struct Alpha {
    /// α, as p/q
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true, value_name = "p/q")]
    pub alpha: Rational,
}

#[derive(Args, Debug)]
pub struct Beta {
    /// β (ψ-variance per unit time), as p/q
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true, value_name = "p/q")]
    pub beta: Rational,
}

#[derive(Args, Debug)]
pub struct TotalTime {
    /// Total time T > 0, as p/q
    #[arg(long = "T", default_value = "1", value_parser = positive, value_name = "p/q")]
    pub total_time: Rational,
}

#[derive(Args, Debug)]
pub struct Time {
    /// Time t > 0, as p/q
    #[arg(long = "t", default_value = "1", value_parser = positive, value_name = "p/q")]
    pub t: Rational,
}

#[derive(Args, Debug)]
pub struct Cells {
    /// Number of increments N
    #[arg(long = "N", default_value = "4", value_parser = at_least_one)]
    pub cells: usize,
}

#[derive(Args, Debug)]
pub struct CellList {
    /// Comma-separated increment counts
    #[arg(long = "N-list", default_value = "1,2,4,8", value_delimiter = ',', value_parser = at_least_one)]
    pub cells: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub beta: Beta,
    #[command(flatten)]
    pub time: TotalTime,
    /// Highest order
    #[arg(long, default_value = "8", value_parser = at_least_one)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct JacobiArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: Time,
    /// Number of moments fed to the conversion
    #[arg(long, default_value = "8", value_parser = at_least_one)]
    pub order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Nu,
    Mu,
    Ct,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Nu => MeasureKind::SemicircleNu,
            MeasureArg::Mu => MeasureKind::FreePoissonMu,
            MeasureArg::Ct => MeasureKind::CtLaw,
        }
    }
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value = "nu")]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: Time,
    /// Number of equally spaced points across the support
    #[arg(long, default_value = "101", value_parser = at_least_one)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct FockArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: TotalTime,
    #[command(flatten)]
    pub cells: Cells,
    /// Highest moment
    #[arg(long, default_value = "6", value_parser = at_least_one)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct FreenessArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: TotalTime,
    /// Number of increments N
    #[arg(long = "N", default_value = "3", value_parser = at_least_one)]
    pub cells: usize,
    /// Longest alternating word
    #[arg(long, default_value = "3", value_parser = at_least_one)]
    pub n: usize,
    /// Highest degree of each centered factor
    #[arg(long, default_value = "2", value_parser = at_least_one)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct MartingaleArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: TotalTime,
    #[command(flatten)]
    pub cells: Cells,
    /// Highest degree of Q_n
    #[arg(long, default_value = "4")]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct VariationArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub beta: Beta,
    #[command(flatten)]
    pub time: TotalTime,
    /// Power of each increment
    #[arg(long, default_value = "2", value_parser = at_least_one)]
    pub k: usize,
    /// With k = 2: report φ[(Σ X_i² − T)^n] instead, with limit 0
    #[arg(long, value_parser = at_least_one)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub cells: CellList,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub beta: Beta,
    #[command(flatten)]
    pub time: TotalTime,
    /// Power of each increment
    #[arg(long, default_value = "2", value_parser = at_least_one)]
    pub k: usize,
    /// Largest n in the 2n-norm
    #[arg(long = "n-max", default_value = "2", value_parser = at_least_one)]
    pub n_max: usize,
    #[command(flatten)]
    pub cells: CellList,
}

#[derive(Args, Debug)]
pub struct GeneratorArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    /// Highest degree of Q_n
    #[arg(long = "n-max", default_value = "12")]
    pub n_max: usize,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: Time,
    /// Largest truncation depth D
    #[arg(long, default_value = "12", value_parser = at_least_one)]
    pub depth: usize,
}

#[derive(Args, Debug)]
pub struct SelfcheckArgs {
    #[command(flatten)]
    pub alpha: Alpha,
    #[command(flatten)]
    pub time: TotalTime,
    #[command(flatten)]
    pub cells: Cells,
    /// Moment order used by the suite
    #[arg(long, default_value = "6", value_parser = at_least_one)]
    pub order: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<freeprob::Error> for CliError {
    fn from(e: freeprob::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Size cap shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_n: usize,
}

impl Limits {
    fn from_env() -> Result<Self, CliError> {
        match std::env::var(MAX_N_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map(|max_n| Limits { max_n })
                .map_err(|_| CliError::Usage(format!("{MAX_N_VAR} must be a non-negative integer, got {v:?}"))),
            Err(_) => Ok(Limits { max_n: DEFAULT_MAX_N }),
        }
    }

    pub fn check(&self, what: &str, value: usize) -> Result<(), CliError> {
        if value > self.max_n {
            return Err(CliError::Usage(format!(
                "{what} = {value} exceeds {MAX_N_VAR} = {}",
                self.max_n
            )));
        }
        Ok(())
    }
}

fn dispatch(command: &Command, limits: Limits) -> Result<(Report, Format), CliError> {
    use Format::{Csv, Json};
    Ok(match command {
        Command::Moments(a) => (commands::moments(a, limits)?, Csv),
        Command::Jacobi(a) => (commands::jacobi(a, limits)?, Csv),
        Command::Density(a) => (commands::density(a)?, Csv),
        Command::FockMoments(a) => (commands::fock_moments(a, limits)?, Csv),
        Command::FreenessCheck(a) => (commands::freeness(a, limits)?, Csv),
        Command::MartingaleCheck(a) => (commands::martingale(a, limits)?, Csv),
        Command::VariationTable(a) => (commands::variation_table(a, limits)?, Csv),
        Command::NormTable(a) => (commands::norm_table(a, limits)?, Csv),
        Command::GeneratorCheck(a) => (commands::generator(a, limits)?, Json),
        Command::KernelResidual(a) => (commands::kernel(a, limits)?, Csv),
        Command::Selfcheck(a) => (selfcheck::run(a, limits)?, Csv),
    })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let limits = Limits::from_env()?;
    let (report, default_format) = dispatch(&cli.command, limits)?;
    let format = cli.format.unwrap_or(default_format);
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.write(format, &mut out)?;
    out.flush()?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(report) if report.failures().is_empty() => ExitCode::SUCCESS,
        Ok(report) => {
            for f in report.failures() {
                eprintln!("identity failed: {f}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
