//! `verify <suite>`: runs verification suites and writes a JSON or CSV report.
//!
//! Exit codes: 0 when no check failed, 1 on any FAIL, 2 on usage errors,
//! 3 on I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hsl_core::report::ReportFormat;
use hsl_core::scalar::parse_rational;
use hsl_core::suite::{replay, run_suite, RunConfig, SuiteName};
use hsl_core::{Error, VerificationReport};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Verify the singular Hessian and Isaacs solutions suite by suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact characteristic polynomial factorization and double roots
    Factorization(RunArgs),
    /// Root interlacing chain and the closed form of λ₆ = λ₇
    Interlacing(RunArgs),
    /// Region-dependent position of the double eigenvalue
    Position(RunArgs),
    /// Exact resultant against the closed forms
    Resultant(RunArgs),
    /// Extreme-eigenvalue ratio of Hessian differences
    Hyperbolicity(RunArgs),
    /// The functional built from the spectrum graph
    Ellipticity(RunArgs),
    /// Positive witnesses orthogonal to pairs of Hessians
    Isaacs(RunArgs),
    /// Separating directions for pairs of sites
    Separation(RunArgs),
    /// Every suite
    All(RunArgs),
    /// Re-execute one recorded check
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// δ value, as p/q or a decimal; repeat for a grid
    #[arg(long = "delta", value_name = "DELTA")]
    deltas: Vec<String>,
    #[arg(long, default_value_t = 12, value_parser = PossibleValuesParser::new(["12", "11"]).map(|s| s.parse::<usize>().expect("listed values")))]
    dim: usize,
    /// Samples per float sweep
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Sites for exact checks and per-site sweeps
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    points: u64,
    #[arg(long, env = "HSL_SEED", default_value_t = 0)]
    seed: u64,
    /// Accept only exact rationals for δ
    #[arg(long)]
    exact: bool,
    /// Override the pass tolerance of tolerance-governed checks
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, env = "HSL_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report here instead of standard output
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// A JSON report written by a previous run
    report_path: PathBuf,
    check_id: String,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, env = "HSL_WORKERS")]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Format(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn config(suites: Vec<SuiteName>, a: &RunArgs) -> Result<RunConfig, Failure> {
    let deltas = a
        .deltas
        .iter()
        .map(|d| parse_rational(d, !a.exact).map_err(|e| Failure::Usage(format!("--delta {d}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = RunConfig {
        suites,
        deltas,
        dim: a.dim,
        samples: a.samples,
        points: a.points,
        seed: a.seed,
        exact: a.exact,
        tolerance: a.tolerance,
        workers: a.workers,
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn emit(report: &VerificationReport, out: &OutputArgs) -> Result<(), Failure> {
    for s in &report.suites {
        let m = &s.summary;
        eprintln!(
            "{:<14} {:>5} checks  {:>5} pass  {:>3} fail  {:>3} inconclusive  {:>9.1} ms",
            s.name, m.total, m.passed, m.failed, m.inconclusive, s.wall_time_ms
        );
    }
    match &out.report {
        Some(path) => report.write(path, out.format.into())?,
        None => {
            let text = match out.format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            };
            println!("{text}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let (suites, args) = match cli.command {
        Command::Replay(r) => {
            let source = VerificationReport::read(&r.report_path)?;
            if source.find(&r.check_id).is_none() {
                return Err(Failure::Usage(format!("no check {:?} in {}", r.check_id, r.report_path.display())));
            }
            let out = replay(&source, &r.check_id, r.tolerance, r.workers)?;
            emit(&out, &r.output)?;
            return Ok(!out.has_failures());
        }
        Command::Factorization(a) => (vec![SuiteName::Factorization], a),
        Command::Interlacing(a) => (vec![SuiteName::Interlacing], a),
        Command::Position(a) => (vec![SuiteName::Position], a),
        Command::Resultant(a) => (vec![SuiteName::Resultant], a),
        Command::Hyperbolicity(a) => (vec![SuiteName::Hyperbolicity], a),
        Command::Ellipticity(a) => (vec![SuiteName::Ellipticity], a),
        Command::Isaacs(a) => (vec![SuiteName::Isaacs], a),
        Command::Separation(a) => (vec![SuiteName::Separation], a),
        Command::All(a) => (SuiteName::ALL.to_vec(), a),
    };
    let cfg = config(suites, &args)?;
    let report = run_suite(&cfg)?;
    emit(&report, &args.output)?;
    Ok(!report.has_failures())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: verify <factorization|interlacing|position|resultant|hyperbolicity|ellipticity|isaacs|separation|all> [OPTIONS]");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
