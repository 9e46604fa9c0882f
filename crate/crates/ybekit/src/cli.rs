//! The `ybekit` command line.
//!
//! Exit codes: 0 success, 1 I/O, parse or usage error, 2 invalid solution,
//! 3 budget exceeded (size guard, caps or time), 4 primitive solution of
//! unexpected shape.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use ybe_core::brace::DEFAULT_BRACE_CAP;
use ybe_core::enumerate::{classify_primitive_with, EnumerationBudget};
use ybe_core::group::DEFAULT_GROUP_CAP;
use ybe_core::{analyze, CatalogRecord, Error, FiniteBrace, PermGroup, Solution};

use crate::format::{
    parse_solution, write_catalog, write_classification_csv, AnalysisJson, BraceJson,
    CatalogHeader, ClassificationJson, FormatError, ValidationJson,
};
use crate::parallel::{self, ParallelConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_SHAPE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ybekit",
    version,
    about = "Involutive set-theoretic Yang-Baxter solutions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the solution axioms for one table.
    Validate { input: String },
    /// Validate, compute the catalog record and run the invariant suite.
    Analyze { input: String },
    /// Export the brace on the permutation group of a solution.
    Brace {
        input: String,
        /// Include the lambda table.
        #[arg(long)]
        lambda: bool,
    },
    /// Enumerate all isomorphism classes of size n as a JSON-lines catalog.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Classify the primitive solutions of sizes 2..=n-max.
    Classify {
        #[arg(long = "n-max", value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        /// Also write a CSV summary.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Options shared by every command. `input` arguments accept a path, `-`
/// for stdin, or an inline JSON document starting with `{`.
#[derive(Debug, Args)]
pub struct RunConfig {
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Enumeration worker threads, 0 for all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Permit enumeration at n = 8.
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Wall-clock limit for enumeration, in seconds.
    #[arg(long, global = true, env = "YBEKIT_BUDGET_SECS")]
    pub budget_secs: Option<f64>,
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP,
          value_parser = positive)]
    pub group_cap: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_BRACE_CAP,
          value_parser = positive)]
    pub brace_cap: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn io(message: impl ToString) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSolution | Error::Retractable => EXIT_INVALID,
            Error::BudgetExceeded { .. }
            | Error::SizeTooLarge { .. }
            | Error::Interrupted
            | Error::GroupOrderCap { .. }
            | Error::BraceOrderCap { .. } => EXIT_BUDGET,
            Error::ShapeViolation { .. } => EXIT_SHAPE,
            _ => EXIT_IO,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::io(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::io(e)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("ybekit: {}", f.message);
            f.code
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32, Failure> {
    let cfg = &cli.config;
    if cfg
        .budget_secs
        .is_some_and(|s| !(s.is_finite() && s >= 0.0))
    {
        return Err(Failure::io("budget seconds must be a non-negative number"));
    }
    match &cli.command {
        Command::Validate { input } => {
            let s = read_solution(input)?;
            let report = s.validate();
            emit(cfg, &ValidationJson::from(&report))?;
            Ok(if report.passes() {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        }
        Command::Analyze { input } => {
            let s = read_solution(input)?;
            if s.validate().passes() {
                check_caps(&s, cfg)?;
            }
            let analysis = analyze(&s)?;
            emit(cfg, &AnalysisJson::from(&analysis))?;
            Ok(if analysis.validation.passes() {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        }
        Command::Brace { input, lambda } => {
            let s = read_solution(input)?;
            if !s.validate().passes() {
                return Err(Error::InvalidSolution.into());
            }
            check_caps(&s, cfg)?;
            let b = FiniteBrace::from_solution_with_cap(&s, cfg.brace_cap)?;
            emit(cfg, &BraceJson::from_brace(&b, *lambda))?;
            Ok(EXIT_OK)
        }
        Command::Enumerate { n } => cmd_enumerate(*n as usize, cfg),
        Command::Classify { n_max, csv } => cmd_classify(*n_max as usize, csv.as_deref(), cfg),
    }
}

fn read_solution(input: &str) -> Result<Solution, Failure> {
    let (text, context) = if input.trim_start().starts_with('{') {
        (input.to_string(), "inline JSON".to_string())
    } else if input == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        (buf, "stdin".to_string())
    } else {
        let text =
            std::fs::read_to_string(input).map_err(|e| Failure::io(format!("{input}: {e}")))?;
        (text, input.to_string())
    };
    Ok(parse_solution(&text, &context)?)
}

fn check_caps(s: &Solution, cfg: &RunConfig) -> Result<(), Failure> {
    let g = PermGroup::generate_with_cap(s.n(), s.sigmas().to_vec(), cfg.group_cap)?;
    if g.order() > cfg.brace_cap {
        return Err(Error::BraceOrderCap { cap: cfg.brace_cap }.into());
    }
    Ok(())
}

fn record_within_caps(r: &CatalogRecord, cfg: &RunConfig) -> Result<(), Failure> {
    if r.group_order > cfg.group_cap {
        return Err(Error::GroupOrderCap { cap: cfg.group_cap }.into());
    }
    if r.group_order > cfg.brace_cap {
        return Err(Error::BraceOrderCap { cap: cfg.brace_cap }.into());
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("plain data serializes")
}

/// Writes the main result to `--output` or stdout.
fn emit<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), Failure> {
    let text = to_json(value, cfg.pretty);
    match &cfg.output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parallel_config(cfg: &RunConfig) -> ParallelConfig {
    ParallelConfig {
        threads: cfg.threads,
        budget: EnumerationBudget {
            allow_large: cfg.allow_large,
        },
        time_budget: cfg.budget_secs.map(Duration::from_secs_f64),
    }
}

#[derive(Serialize)]
struct EnumerationSummary {
    n: usize,
    classes: usize,
    indecomposable: usize,
    irretractable: usize,
    primitive: usize,
    multipermutation: usize,
    brace_trivial: usize,
    work_units: usize,
    nodes: u64,
    duplicates: u64,
    elapsed_secs: f64,
}

fn cmd_enumerate(n: usize, cfg: &RunConfig) -> Result<i32, Failure> {
    let run = parallel::enumerate(n, &parallel_config(cfg))?;
    let records: Vec<CatalogRecord> = run
        .solutions
        .par_iter()
        .map(CatalogRecord::from_solution)
        .collect::<Result<_, Error>>()?;
    for r in &records {
        record_within_caps(r, cfg)?;
    }
    let count = |f: fn(&CatalogRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let summary = EnumerationSummary {
        n,
        classes: records.len(),
        indecomposable: count(|r| r.indecomposable),
        irretractable: count(|r| r.irretractable),
        primitive: count(|r| r.primitive),
        multipermutation: count(|r| r.mpl.is_some()),
        brace_trivial: count(|r| r.brace_trivial),
        work_units: run.units,
        nodes: run.nodes,
        duplicates: run.duplicates,
        elapsed_secs: run.elapsed.as_secs_f64(),
    };
    let header = CatalogHeader {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        n,
        classes: records.len(),
        allow_large: cfg.allow_large,
        budget_secs: cfg.budget_secs,
        threads: cfg.threads,
        group_cap: cfg.group_cap,
        brace_cap: cfg.brace_cap,
    };
    let summary = to_json(&summary, cfg.pretty);
    match &cfg.output {
        Some(path) => {
            write_catalog(BufWriter::new(create(path)?), &header, &records)?;
            println!("{summary}");
        }
        None => {
            write_catalog(BufWriter::new(io::stdout().lock()), &header, &records)?;
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_classify(n_max: usize, csv: Option<&Path>, cfg: &RunConfig) -> Result<i32, Failure> {
    let pcfg = parallel_config(cfg);
    let report = match classify_primitive_with(n_max, |n| {
        parallel::enumerate(n, &pcfg).map(|run| run.solutions)
    }) {
        Ok(report) => report,
        Err(e @ Error::ShapeViolation { .. }) => {
            eprintln!("ybekit: classification falsified: {e}");
            return Ok(EXIT_SHAPE);
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = csv {
        write_classification_csv(create(path)?, &report)?;
    }
    emit(cfg, &ClassificationJson::from(&report))?;
    Ok(EXIT_OK)
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}
