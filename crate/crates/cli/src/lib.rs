//! Library side of the `kkgeo` command: configuration, execution, reports.

pub mod config;
pub mod report;
pub mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{build_config, parse_entries, parse_expression, Command, Entry, Format, RunConfig};
pub use report::{emit, Report, Table};
pub use run::{execute, Run};

#[derive(Debug, Error, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Parse { .. } => "E_PARSE",
            CliError::Validation(_) => "E_CONFIG",
            CliError::Runtime(_) => "E_RUNTIME",
            CliError::Io { .. } => "E_IO",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 3,
        }
    }

    /// The single line printed on stderr.
    pub fn line(&self) -> String {
        format!("error[{}]: {}", self.code(), self.to_string().replace('\n', " "))
    }
}

/// Command-line surface, already split by the argument parser.
#[derive(Clone, Debug, Default)]
pub struct Invocation {
    /// Command word and/or `key=value` pairs, in order.
    pub positional: Vec<String>,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub claims: Vec<String>,
}

/// Layers the config file, positional pairs and flags, in that order.
pub fn resolve(inv: &Invocation) -> Result<RunConfig, CliError> {
    let mut entries = Vec::new();
    if let Some(path) = &inv.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        entries.extend(parse_entries(&text, &path.display().to_string())?);
    }
    for (i, arg) in inv.positional.iter().enumerate() {
        let text = if i == 0 && !arg.contains('=') { format!("command={arg}") } else { arg.clone() };
        let mut parsed = parse_entries(&text, &format!("arg{}", i + 1))?;
        if i == 0 && !arg.contains('=') {
            for e in &mut parsed {
                e.value_col -= "command=".len();
                e.key_col = e.value_col;
            }
        }
        entries.extend(parsed);
    }
    let flag = |key: &str, value: String| Entry {
        key: key.into(),
        value,
        source: format!("--{key}"),
        line: 1,
        key_col: 1,
        value_col: 1,
    };
    if let Some(s) = inv.seed {
        entries.push(flag("seed", s.to_string()));
    }
    if let Some(t) = inv.tol {
        entries.push(flag("tol", t.to_string()));
    }
    if let Some(o) = &inv.out {
        entries.push(flag("out", o.display().to_string()));
    }
    if let Some(f) = &inv.format {
        entries.push(flag("format", f.clone()));
    }
    for c in &inv.claims {
        entries.push(flag("claim", c.clone()));
    }
    build_config(&entries)
}

/// Resolve, execute and emit; returns the process exit status.
pub fn main_with(inv: &Invocation) -> Result<i32, CliError> {
    let cfg = resolve(inv)?;
    let run = execute(&cfg)?;
    emit(&run.report, run.table.as_ref(), cfg.format == Format::Csv, cfg.out.as_deref())?;
    Ok(run.exit)
}
