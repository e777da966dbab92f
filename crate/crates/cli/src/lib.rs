//! The `fracvar` command-line tool.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! or configuration errors.

pub mod commands;
pub mod fnspec;
pub mod output;
pub mod properties;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Report, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fracvar",
    version,
    about = "Fractional Riemann-Liouville operators and fractional Euler-Lagrange systems"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Left endpoint.
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub a: f64,
    /// Right endpoint.
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub b: f64,
    /// Number of grid cells.
    #[arg(long, global = true, default_value_t = 1024)]
    pub n: usize,
    /// Fractional order in (0, 1].
    #[arg(
        long,
        global = true,
        default_value_t = 0.5,
        allow_negative_numbers = true
    )]
    pub alpha: f64,
    /// Fraction of the interval excluded at each end from norms.
    #[arg(long, global = true, default_value_t = fracvar::fracops::DEFAULT_TRIM, allow_negative_numbers = true)]
    pub trim: f64,
    /// Directory for `<command>.csv`, `<command>.json` and `<command>.svg`.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// What to print on stdout (and whether to render SVG).
    #[arg(long, global = true, value_enum)]
    #[serde(skip)]
    pub format: Option<Format>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Logarithmic y axis in SVG plots.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub log_y: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply one operator to a function and compare with the analytic result.
    Op(commands::OpArgs),
    /// Build an example system's solution and evaluate its Euler-Lagrange residuals.
    Example(commands::ExampleArgs),
    /// Distance of the Example B family to the classical solution as alpha -> 1.
    LimitStudy(commands::LimitArgs),
    /// Solve the discretized Example B system with pins and compare with the closed form.
    Oracle(commands::OracleArgs),
    /// Run the operator property suite.
    Properties(commands::PropertiesArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Op(_) => "op",
            Command::Example(_) => "example",
            Command::LimitStudy(_) => "limit-study",
            Command::Oracle(_) => "oracle",
            Command::Properties(_) => "properties",
        }
    }
}

/// Result of a command before it is written anywhere.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub table: Option<Table>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(std::io::Error),
}

impl From<fracvar::FracError> for CliError {
    fn from(e: fracvar::FracError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(e: String) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses, runs and writes one invocation. Returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) if report.pass => EXIT_OK,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let name = cli.command.name();
    let outcome = commands::dispatch(&cli.global, &cli.command)?;
    let g = &cli.global;
    let format = g.format.unwrap_or(if outcome.table.is_some() {
        Format::Csv
    } else {
        Format::Json
    });
    let csv = || {
        outcome
            .table
            .as_ref()
            .map_or_else(|| outcome.report.checks_table_csv(), Table::to_csv)
    };
    let svg = || -> Result<String, CliError> {
        let t = outcome
            .table
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("`{name}` produces no plottable table")))?;
        Ok(t.to_svg(name, g.log_y))
    };

    if let Some(dir) = &g.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{name}.csv")), csv())?;
        std::fs::write(dir.join(format!("{name}.json")), outcome.report.to_json())?;
        if format == Format::Svg {
            std::fs::write(dir.join(format!("{name}.svg")), svg()?)?;
        }
    } else {
        let body = match format {
            Format::Csv => csv(),
            Format::Json => outcome.report.to_json(),
            Format::Svg => svg()?,
        };
        let _ = std::io::stdout().lock().write_all(body.as_bytes());
    }
    let mut err = std::io::stderr().lock();
    for c in &outcome.report.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            err,
            "{tag} {}: {:.6e} (threshold {:.3e})",
            c.name, c.value, c.threshold
        );
    }
    Ok(outcome.report)
}
