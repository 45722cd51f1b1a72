//! froblab command line: exact Frobenius numbers, closed-form bounds,
//! box sampling, primitive-vector counting, and seeded statistical
//! experiments with machine-readable reports.
//!
//! Standard output carries data; check summaries and diagnostics go to
//! standard error. Exit codes: 0 success / all checks pass, 1 usage
//! error, 2 domain error, 3 arithmetic overflow, 4 an experiment ran
//! but an invariant check failed.

mod experiments;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use froblab::bounds::BoundSet;
use froblab::sampler::{self, SampleMode, SampleSpec};
use froblab::{frobenius, report, Error, PrimitiveVector, Result};

use experiments::{ExperimentArgs, ExperimentKind};

/// Default seed for bare invocations; override with --seed or the
/// FROBLAB_SEED environment variable.
pub const DEFAULT_SEED: u64 = 0xF90BE1;

#[derive(Parser)]
#[command(
    name = "froblab",
    version,
    about = "Frobenius numbers: exact computation, closed-form bounds, seeded experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    /// Log-log tail plot; valid only for the tail experiments.
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    MonteCarlo,
    Exhaustive,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::MonteCarlo => SampleMode::MonteCarlo,
            Mode::Exhaustive => SampleMode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact Frobenius number of the given entries
    Frob {
        /// Positive integers with gcd 1
        #[arg(required = true, num_args = 2..)]
        entries: Vec<u64>,
    },
    /// Closed-form bounds around the exact Frobenius number
    Bounds {
        #[arg(required = true, num_args = 2..)]
        entries: Vec<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Draw or enumerate primitive vectors from the box {1..T}^n
    Sample {
        #[arg(long)]
        n: u32,
        #[arg(long = "T")]
        t: u64,
        /// Number of Monte Carlo draws (ignored in exhaustive mode)
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Mode::MonteCarlo)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Output path; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exact number of primitive vectors in the box {1..T}^n
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long = "T")]
        t: u64,
    },
    /// Statistical experiments with pass/fail invariant checks
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        #[arg(long)]
        n: u32,
        #[arg(long = "T")]
        t: u64,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Moment order (defaults: n-1 for l-tail, 2 for l-moment)
        #[arg(long)]
        k: Option<f64>,
        /// Strictly increasing tail grid, e.g. --thresholds 2,3,4,6,8
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<f64>>,
        /// Split experiment: tail threshold beta > 1
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Split experiment: exponent in (0, 1); default (n-1)/(n+1)
        #[arg(long = "t-split")]
        t_split: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::MonteCarlo)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                Error::Usage(_) => 1,
                Error::Domain(_) => 2,
                Error::Overflow(_) => 3,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Frob { entries } => {
            let a = PrimitiveVector::new(entries)?;
            let result = frobenius::frobenius(&a)?;
            println!("{} {}", result.value, result.algorithm);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { entries, format } => {
            let a = PrimitiveVector::new(entries)?;
            let set = BoundSet::evaluate(&a)?;
            if let Err(violation) = set.check_sandwich(a.dim()) {
                eprintln!("sandwich violation: {violation}");
            }
            let data = match format {
                OutputFormat::Json => report::to_json_pretty(&set),
                OutputFormat::Csv => bounds_csv(&set),
                OutputFormat::Svg => {
                    return Err(Error::Usage(
                        "svg output is only valid for tail experiments".into(),
                    ))
                }
            };
            print!("{data}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample {
            n,
            t,
            count,
            seed,
            mode,
            format,
            out,
            workers,
        } => {
            let batch = match mode {
                Mode::MonteCarlo => {
                    let spec = SampleSpec::monte_carlo(t, n, resolve_seed(seed)?, count);
                    sampler::sample_uniform_with_workers(&spec, workers)?
                }
                Mode::Exhaustive => sampler::enumerate_all(t, n)?,
            };
            let data = match format {
                OutputFormat::Csv => report::batch_csv(&batch),
                OutputFormat::Json => report::batch_json(&batch),
                OutputFormat::Svg => {
                    return Err(Error::Usage(
                        "svg output is only valid for tail experiments".into(),
                    ))
                }
            };
            write_output(out.as_deref(), &data)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { n, t } => {
            println!("{}", sampler::count_primitive(t, n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment {
            kind,
            n,
            t,
            count,
            seed,
            k,
            thresholds,
            beta,
            t_split,
            mode,
            format,
            out,
            workers,
        } => experiments::run(ExperimentArgs {
            kind,
            n,
            t,
            count,
            seed: resolve_seed(seed)?,
            k,
            thresholds,
            beta,
            t_split,
            mode: mode.into(),
            format,
            out,
            workers,
        }),
    }
}

fn bounds_csv(set: &BoundSet) -> String {
    let eg = set
        .erdos_graham_upper
        .map_or(String::new(), |v| v.to_string());
    format!(
        "aliev_gruber_lower,erdos_graham_upper,fukshansky_robins_upper,frobenius\n{},{eg},{},{}\n",
        set.aliev_gruber_lower, set.fukshansky_robins_upper, set.frobenius
    )
}

/// Seed precedence: --seed flag, then FROBLAB_SEED, then the default.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("FROBLAB_SEED") {
        Ok(raw) => parse_seed(&raw)
            .ok_or_else(|| Error::Usage(format!("FROBLAB_SEED is not a valid seed: {raw:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn parse_seed(raw: &str) -> Option<u64> {
    let raw = raw.trim();
    if let Some(hex) = raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).ok()
    } else {
        raw.parse().ok()
    }
}

pub fn write_output(path: Option<&std::path::Path>, data: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(data.as_bytes())
                .map_err(|e| Error::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}
