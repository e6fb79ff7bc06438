//! Command implementations behind the `ballbody` binary.
//!
//! Every command returns an [`Outcome`]: the rendered report plus whether
//! all mathematical contracts held. Input problems surface as
//! [`CliError::Usage`]; the binary maps these to exit codes 0, 1 and 2.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

pub mod commands;
pub mod suites;

pub use commands::{cmd_counterexample, cmd_flat, cmd_lps, cmd_steiner2d, cmd_suite};

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "ballbody/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ballbody::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Settings shared by all commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub grid: usize,
    /// Overrides the verdict tolerance where a command has one.
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cases: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            grid: ballbody::symmetry::STEINER_GRID,
            tol: None,
            out: None,
            format: Format::Json,
            cases: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.grid < 64 {
            return Err(CliError::Usage(format!("--grid must be at least 64, got {}", self.grid)));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        if self.cases == Some(0) {
            return Err(CliError::Usage("--cases must be positive".into()));
        }
        Ok(())
    }
}

/// A finished command: rendered text, the JSON payload and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    /// Writes the rendered report to `cfg.out` or stdout.
    pub fn emit(&self, cfg: &RunConfig) -> CliResult<()> {
        match &cfg.out {
            Some(path) => fs::write(path, &self.text)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes())?;
            }
        }
        Ok(())
    }
}

/// Wraps a payload with the schema tag and command name.
pub(crate) fn envelope(command: &str, pass: bool, payload: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command, "pass": pass });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, payload) {
        dst.extend(src);
    }
    v
}

pub(crate) fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub(crate) fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Renders rows as CSV.
pub(crate) fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}
