//! `lampharm` command-line front end.

mod commands;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lampharm::graph::DEFAULT_BUDGET;
use lampharm::potential::DEFAULT_TOLERANCE;
use lampharm::walk::DEFAULT_SEED;
use lampharm::Error;
use serde::Serialize;

use report::ExperimentReport;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "lampharm",
    version,
    about = "Potential-theory probes on lamplighter and product graphs"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Vertex budget for ball materialization.
    #[arg(long, global = true, env = "LAMPHARM_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Solver stopping tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Also write report.json and report.csv here.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Summarize a graph: degree bound, ball sizes, end count; optionally export a ball.
    BuildGraph(commands::BuildGraph),
    /// Solve a Dirichlet problem on a ball.
    Solve(commands::Solve),
    /// p-capacity of the annulus between B_r and B_R.
    Capacity(commands::Capacity),
    /// Isoperimetric ratios and growth fit.
    Isoprofile(commands::Isoprofile),
    /// Spanning line in the k-fuzz: built-in or searched.
    Spanline(commands::Spanline),
    /// Total-variation contrast of lazy random walks from adjacent starts.
    Liouville(commands::Liouville),
    /// Run a canned experiment suite.
    Reproduce(suites::Reproduce),
}

/// Failures with their exit code.
pub enum Failure {
    Usage(String),
    Budget(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Run(e.into())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Run(e) => match e {
                Error::BudgetExceeded { .. } | Error::NonConvergence { .. } => 3,
                _ => 2,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Budget(_) => "budget",
            Failure::Run(e) => match e {
                Error::Descriptor(_) | Error::Json(_) => "descriptor",
                Error::BudgetExceeded { .. } => "budget",
                Error::NonConvergence { .. } => "non-convergence",
                Error::Io(_) => "io",
                _ => "invalid-input",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Budget(m) => m.clone(),
            Failure::Run(e) => e.to_string(),
        }
    }
}

fn emit(report: &ExperimentReport, common: &Common) -> Result<(), Failure> {
    if let Some(dir) = &common.out_dir {
        report.write_dir(dir)?;
    }
    let stdout = std::io::stdout().lock();
    match common.format {
        Format::Json => report.write_json(stdout)?,
        Format::Csv => report.write_csv(stdout)?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExperimentReport, Failure> {
    let config = serde_json::to_value(cli).expect("options serialize");
    let c = &cli.common;
    match &cli.command {
        Command::BuildGraph(a) => commands::build_graph(a, c, config),
        Command::Solve(a) => commands::solve(a, c, config),
        Command::Capacity(a) => commands::capacity(a, c, config),
        Command::Isoprofile(a) => commands::isoprofile(a, c, config),
        Command::Spanline(a) => commands::spanline(a, c, config),
        Command::Liouville(a) => commands::liouville(a, c, config),
        Command::Reproduce(a) => suites::reproduce(a, c, config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|report| {
        emit(&report, &cli.common)?;
        Ok(report)
    });
    match outcome {
        Ok(report) if report.all_passed() => ExitCode::SUCCESS,
        Ok(report) => {
            for v in report.verdicts.iter().filter(|v| !v.passed) {
                eprintln!(
                    "verdict failed: {} (observed {}, threshold {})",
                    v.name, v.observed, v.threshold
                );
            }
            ExitCode::from(1)
        }
        Err(f) => {
            let body = serde_json::json!({"error": {"kind": f.kind(), "message": f.message()}});
            eprintln!("{body}");
            ExitCode::from(f.code())
        }
    }
}
