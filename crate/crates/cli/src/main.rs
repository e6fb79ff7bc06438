use std::path::PathBuf;
use std::process::ExitCode;

use ballbody_cli::suites::SuiteName;
use ballbody_cli::{cmd_counterexample, cmd_flat, cmd_lps, cmd_steiner2d, cmd_suite, CliResult, Format, Outcome, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ballbody", version, about = "Ball-convex bodies: duality, symmetrals and lenses")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Fibers per Steiner symmetral.
    #[arg(long, global = true, default_value_t = ballbody::symmetry::STEINER_GRID)]
    grid: usize,
    /// Verdict tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of suite cases.
    #[arg(long, global = true)]
    cases: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the three-dimensional lens counterexample.
    Counterexample {
        #[arg(long, value_delimiter = ',', num_args = 3, allow_negative_numbers = true)]
        c0: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
        w: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
    },
    /// Build a lens whose symmetral is flatter than epsilon.
    Flat {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Trace a linear parameter system.
    Lps {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, requires = "t_max", allow_negative_numbers = true)]
        t_min: Option<f64>,
        #[arg(long, requires = "t_min", allow_negative_numbers = true)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = ballbody::lps::TRACE_POINTS)]
        points: usize,
    },
    /// Steiner-symmetrize a disk-polygon.
    Steiner2d {
        /// Generator set as JSON; a seeded random body otherwise.
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
    },
    /// Run a randomized property suite.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

fn array<const N: usize>(v: Option<Vec<f64>>) -> Option<[f64; N]> {
    v.map(|v| v.try_into().expect("clap enforces the count"))
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let cfg = RunConfig {
        seed: cli.seed,
        grid: cli.grid,
        tol: cli.tol,
        out: cli.out,
        format: cli.format,
        cases: cli.cases,
    };
    let outcome = match cli.command {
        Command::Counterexample { c0, w, direction } => cmd_counterexample(&cfg, array(c0), array(w), array(direction)),
        Command::Flat { epsilon, dim } => cmd_flat(&cfg, epsilon, dim),
        Command::Lps {
            spec,
            t_min,
            t_max,
            points,
        } => cmd_lps(&cfg, &spec, t_min.zip(t_max), points),
        Command::Steiner2d { body, direction } => cmd_steiner2d(&cfg, body.as_deref(), array(direction)),
        Command::Suite { name } => cmd_suite(&cfg, name),
    }?;
    outcome.emit(&cfg)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("ballbody: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
