use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use kkgeo_cli::{main_with, CliError, Invocation};

/// Curvature, identity checks, geodesics and fringe profiles for
/// six-dimensional metric ansatzes.
#[derive(Parser, Debug)]
#[command(name = "kkgeo", version)]
struct Args {
    /// `curvature`, `verify`, `geodesic` or `fringes`, then `key=value` settings
    positional: Vec<String>,
    /// Flat key=value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Zero-test tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// Claim id to run; repeatable
    #[arg(long = "claim")]
    claims: Vec<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_string()).line());
            return ExitCode::from(2);
        }
    };
    let inv = Invocation {
        positional: args.positional,
        config: args.config,
        seed: args.seed,
        tol: args.tol,
        out: args.out,
        format: args.format,
        claims: args.claims,
    };
    match main_with(&inv) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
