//! `folia` command-line tool.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use folia::groebner::Budget;
use folia::report::{emit, Format};
use folia::Error;

/// Exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERDICT: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_AMBIENT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "folia", version, about = "Exact computations with foliations on weighted projective spaces")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// bound on the absolute value of random integer coefficients
    #[arg(long, global = true, default_value_t = 5)]
    pub coef_bound: u32,
    #[arg(long, global = true, default_value_t = 50_000)]
    pub gb_pair_budget: usize,
    #[arg(long, global = true, default_value_t = 60)]
    pub gb_degree_cap: u32,
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    pub format: String,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// include per-phase wall-clock timings in the report
    #[arg(long, global = true)]
    pub timings: bool,
    /// wall-clock soft cap in milliseconds
    #[arg(long, global = true, env = "FOLIA_BUDGET_MS", hide_env_values = true)]
    pub budget_ms: Option<u64>,
}

impl Common {
    pub fn budget(&self, start: Instant) -> Budget {
        Budget {
            max_pairs: self.gb_pair_budget,
            max_degree: self.gb_degree_cap,
            deadline: self.budget_ms.map(|ms| start + Duration::from_millis(ms)),
        }
    }

    pub fn over_time(&self, start: Instant) -> bool {
        self.budget_ms.is_some_and(|ms| start.elapsed() > Duration::from_millis(ms))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a 1-form defines a foliation
    Check(commands::CheckArgs),
    /// Pull a form back along a map
    Pullback(commands::PullbackArgs),
    /// Dimension of the Zariski tangent space of a foliation
    TangentDim(commands::FormArg),
    /// Compare the tangent space of a pullback with pullbacks plus unfoldings
    VerifyMain(commands::VerifyArgs),
    /// Degrees admissible for foliations on a weighted projective plane
    GoodDegrees(commands::GoodDegreesArgs),
    /// Degree table of the catalogued families
    Census(commands::CensusArgs),
    /// Kupka comparison for the singular set of a 1-form
    Kupka(commands::FormArg),
}

/// Command outcome: a report plus the exit status it implies.
pub struct Outcome {
    pub report: folia::report::Report,
    pub status: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => EXIT_BUDGET,
        Error::Ambient(_) | Error::AmbientMismatch(..) => EXIT_AMBIENT,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Check(a) => commands::check(c, a, start),
        Command::Pullback(a) => commands::pullback(c, a),
        Command::TangentDim(a) => commands::tangent_dim(c, a, start),
        Command::VerifyMain(a) => commands::verify_main(c, a, start),
        Command::GoodDegrees(a) => commands::good_degrees(c, a),
        Command::Census(a) => commands::census(c, a),
        Command::Kupka(a) => commands::kupka(c, a, start),
    };
    match result {
        Ok(outcome) => {
            let format: Format = c.format.parse().expect("validated by clap");
            let bytes = emit(&outcome.report, format);
            let written = match &c.out {
                Some(path) => std::fs::write(path, &bytes),
                None => std::io::stdout().write_all(&bytes),
            };
            if let Err(e) = written {
                eprintln!("folia: cannot write output: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("folia: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
