//! Report schema and emission. Field order here is the JSON key order.

use std::collections::BTreeMap;
use std::fs;
use std::io::{ErrorKind, Write};
use std::path::Path;

use kkgeo::curvature::oracle::OracleComparison;
use kkgeo::dynamics::{Convergence, Grid, SlitGeometry};
use kkgeo::symcore::Assignment;
use kkgeo::verify::ClaimReport;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const TOOL: &str = "kkgeo";

/// Expressions longer than this are summarized by size only.
pub const EXPR_TEXT_LIMIT: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub records: Vec<ClaimReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fringes: Option<FringeSummary>,
    pub timing: Timing,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub phases_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExprText {
    pub chars: usize,
    pub text: Option<String>,
}

impl ExprText {
    pub fn new(s: String) -> Self {
        let chars = s.chars().count();
        ExprText { chars, text: (chars <= EXPR_TEXT_LIMIT).then_some(s) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub index: [usize; 2],
    pub expr: ExprText,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub ansatz: String,
    pub inverse: String,
    pub inverse_max_residual: Option<f64>,
    pub christoffel_nonzero: usize,
    pub ricci_symmetric: bool,
    pub ricci_scalar: ExprText,
    pub einstein: Vec<Component>,
    pub oracle: OracleComparison,
    pub oracle_params: Assignment,
    pub oracle_tol: f64,
    pub oracle_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSummary {
    pub p: [f64; 4],
    pub m0: f64,
    pub steps: usize,
    pub tau_end: f64,
    pub max_deviation: f64,
    pub max_step_defect: f64,
    pub interval_law_residual: f64,
    pub convergence: Convergence,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringeSummary {
    pub geometry: SlitGeometry,
    pub grid: Grid,
    pub minima: Vec<f64>,
    pub oracle_minima: Vec<f64>,
    pub max_offset_cells: f64,
    pub peak: f64,
    pub darkest_minimum_ratio: f64,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        Report {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            records: Vec::new(),
            curvature: None,
            geodesic: None,
            fringes: None,
            timing: Timing::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// JSON with the `timing` key removed, for reproducibility comparisons.
    pub fn json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

/// A CSV table with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

fn write(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// With an output directory: `report.json` always, plus the table as CSV
/// when asked. Without one: the chosen format goes to stdout.
pub fn emit(report: &Report, table: Option<&Table>, csv: bool, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Io { path: dir.display().to_string(), message: e.to_string() })?;
            write(&dir.join("report.json"), &report.to_json())?;
            if let (true, Some(t)) = (csv, table) {
                write(&dir.join(format!("{}.csv", t.name)), &t.to_csv())?;
            }
        }
        None => {
            let text = match (csv, table) {
                (true, Some(t)) => t.to_csv(),
                _ => report.to_json(),
            };
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    return Err(CliError::Io { path: "<stdout>".into(), message: e.to_string() })
                }
                _ => {}
            }
        }
    }
    Ok(())
}
