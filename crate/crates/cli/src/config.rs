//! Flat `key=value` configuration: parsing, layering and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use kkgeo::ansatz::{dirac_components, AnsatzId, Bindings, ParamKind};
use kkgeo::dynamics::{Grid, SlitGeometry};
use kkgeo::symcore::{eval, parse_expr, Assignment, Expr, SymError, Symbol, SymbolTable, ZeroTest};
use kkgeo::verify::{claim_ids, must_pass_ids};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Curvature,
    Verify,
    Geodesic,
    Fringes,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Curvature => "curvature",
            Command::Verify => "verify",
            Command::Geodesic => "geodesic",
            Command::Fringes => "fringes",
        })
    }
}

impl FromStr for Command {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "curvature" => Ok(Command::Curvature),
            "verify" => Ok(Command::Verify),
            "geodesic" => Ok(Command::Geodesic),
            "fringes" => Ok(Command::Fringes),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// One `key=value` occurrence with its position (1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub source: String,
    pub line: usize,
    pub key_col: usize,
    pub value_col: usize,
}

impl Entry {
    fn at_key(&self, message: impl Into<String>) -> CliError {
        CliError::Parse { origin: self.source.clone(), line: self.line, column: self.key_col, message: message.into() }
    }

    fn at_value(&self, offset: usize, message: impl Into<String>) -> CliError {
        CliError::Parse {
            origin: self.source.clone(),
            line: self.line,
            column: self.value_col + offset,
            message: message.into(),
        }
    }
}

/// Split text into entries. Pairs are separated by whitespace or newlines;
/// `#` starts a comment.
pub fn parse_entries(text: &str, source: &str) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(start, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            let mut end = line.len();
            while let Some(&(k, c)) = chars.peek() {
                if c.is_whitespace() {
                    end = k;
                    break;
                }
                chars.next();
            }
            let word = &line[start..end];
            let col = line[..start].chars().count() + 1;
            let Some(eq) = word.find('=') else {
                return Err(CliError::Parse {
                    origin: source.into(),
                    line: ln + 1,
                    column: col,
                    message: format!("expected key=value, found `{word}`"),
                });
            };
            let key = &word[..eq];
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::Parse {
                    origin: source.into(),
                    line: ln + 1,
                    column: col,
                    message: format!("malformed key `{key}`"),
                });
            }
            out.push(Entry {
                key: key.to_string(),
                value: word[eq + 1..].to_string(),
                source: source.to_string(),
                line: ln + 1,
                key_col: col,
                value_col: col + key.chars().count() + 1,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicParams {
    pub p: [f64; 3],
    pub m0: f64,
    pub steps: usize,
    pub tau_end: f64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub ansatz: Option<AnsatzId>,
    /// `None` marks an explicitly symbolic parameter.
    pub bindings: BTreeMap<String, Option<Expr>>,
    pub claims: Vec<String>,
    pub seed: u64,
    pub tol: f64,
    pub trials: usize,
    pub points: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub geodesic: GeodesicParams,
    pub slits: SlitGeometry,
    pub grid: Grid,
    /// Effective settings, echoed in the report.
    pub echo: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn zero_test(&self) -> ZeroTest {
        ZeroTest::new(self.trials, self.tol, self.seed)
    }

    /// Bound numeric parameters only.
    pub fn ansatz_bindings(&self) -> Bindings {
        self.bindings.iter().filter_map(|(k, v)| v.clone().map(|v| (k.clone(), v))).collect()
    }
}

const COMMON: [&str; 6] = ["command", "seed", "tol", "trials", "out", "format"];
const GEODESIC_KEYS: [&str; 6] = ["p1", "p2", "p3", "m0", "steps", "tau_end"];
const FRINGE_KEYS: [&str; 6] = ["d", "L", "lambda", "y_min", "y_max", "n"];

fn number<T: FromStr>(e: &Entry, what: &str) -> Result<T, CliError> {
    e.value.parse().map_err(|_| e.at_value(0, format!("expected {what} for `{}`, found `{}`", e.key, e.value)))
}

fn positive(e: &Entry) -> Result<f64, CliError> {
    let v: f64 = number(e, "a number")?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(e.at_value(0, format!("`{}` must be positive", e.key)))
    }
}

/// Exact constant for an ansatz parameter; positions point into the value.
fn constant(e: &Entry) -> Result<Expr, CliError> {
    parse_expr(&e.value, &SymbolTable::empty()).map_err(|err| match err {
        SymError::Syntax { column, message, .. } => e.at_value(column - 1, message),
        SymError::UnknownSymbol(name) => {
            let off = e.value.find(name.as_str()).unwrap_or(0);
            e.at_value(off, format!("expected a number or `symbolic`, found `{name}`"))
        }
        other => e.at_value(0, other.to_string()),
    })
}

fn check_kind(e: &Entry, v: &Expr, kind: ParamKind) -> Result<(), CliError> {
    let z = eval(v, &Assignment::new()).map_err(|err| e.at_value(0, err.to_string()))?;
    if z.im != 0.0 {
        return Err(e.at_value(0, format!("`{}` must be real", e.key)));
    }
    if kind == ParamKind::Positive && z.re <= 0.0 {
        return Err(e.at_value(0, format!("`{}` must be positive", e.key)));
    }
    Ok(())
}

/// Layer `entries` (later wins; `claim` accumulates) and validate.
pub fn build_config(entries: &[Entry]) -> Result<RunConfig, CliError> {
    let last = |key: &str| entries.iter().rev().find(|e| e.key == key);
    let command = match last("command") {
        Some(e) => e.value.parse::<Command>().map_err(|_| e.at_value(0, format!("unknown command `{}`", e.value)))?,
        None => return Err(CliError::Usage("no command given (curvature, verify, geodesic, fringes)".into())),
    };
    let ansatz = match last("ansatz") {
        Some(e) if command == Command::Curvature => {
            Some(e.value.parse::<AnsatzId>().map_err(|err| e.at_value(0, err.to_string()))?)
        }
        _ => None,
    };
    let params = ansatz.map(|a| a.params()).unwrap_or_default();

    let zt = ZeroTest::default();
    let mut cfg = RunConfig {
        command,
        ansatz,
        bindings: BTreeMap::new(),
        claims: Vec::new(),
        seed: 0,
        tol: zt.tol,
        trials: zt.trials,
        points: 20,
        out: None,
        format: Format::Json,
        geodesic: GeodesicParams { p: [0.3, -0.2, 0.5], m0: 1.0, steps: 1000, tau_end: 1.0 },
        slits: SlitGeometry { d: 1e-3, l: 1.0, lambda: 5e-7 },
        grid: Grid { y_min: -2e-3, y_max: 2e-3, n: 801 },
        echo: BTreeMap::new(),
    };
    let mut explicit_claims = false;
    for e in entries {
        let k = e.key.as_str();
        let allowed = COMMON.contains(&k)
            || match command {
                Command::Curvature => k == "ansatz" || k == "points" || params.iter().any(|p| p.name == k),
                Command::Verify => k == "claim",
                Command::Geodesic => GEODESIC_KEYS.contains(&k),
                Command::Fringes => FRINGE_KEYS.contains(&k),
            };
        if !allowed {
            let hint = match ansatz {
                Some(a) if command == Command::Curvature => format!(" (ansatz `{a}` takes {})", names(&params)),
                _ => String::new(),
            };
            return Err(e.at_key(format!("unknown key `{k}` for command `{command}`{hint}")));
        }
        match k {
            "command" | "ansatz" => {}
            "seed" => cfg.seed = number(e, "an unsigned integer")?,
            "tol" => cfg.tol = positive(e)?,
            "trials" => {
                cfg.trials = number(e, "an unsigned integer")?;
                if cfg.trials == 0 {
                    return Err(e.at_value(0, "`trials` must be at least 1"));
                }
            }
            "points" => cfg.points = number(e, "an unsigned integer")?,
            "out" => cfg.out = Some(PathBuf::from(&e.value)),
            "format" => {
                cfg.format = match e.value.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(e.at_value(0, format!("unknown format `{}` (json, csv)", e.value))),
                }
            }
            "claim" => {
                explicit_claims = true;
                for (off, id) in split_list(&e.value) {
                    if id == "all" {
                        cfg.claims.extend(claim_ids().iter().map(|s| s.to_string()));
                    } else if claim_ids().contains(&id) {
                        cfg.claims.push(id.to_string());
                    } else {
                        return Err(e.at_value(off, format!("unknown claim id `{id}`")));
                    }
                }
            }
            "p1" | "p2" | "p3" | "m0" if command == Command::Geodesic => {
                let v: f64 = number(e, "a number")?;
                match k {
                    "p1" => cfg.geodesic.p[0] = v,
                    "p2" => cfg.geodesic.p[1] = v,
                    "p3" => cfg.geodesic.p[2] = v,
                    _ => cfg.geodesic.m0 = v,
                }
            }
            "steps" => cfg.geodesic.steps = number(e, "an unsigned integer")?,
            "tau_end" => cfg.geodesic.tau_end = number(e, "a number")?,
            "d" => cfg.slits.d = positive(e)?,
            "L" => cfg.slits.l = positive(e)?,
            "lambda" => cfg.slits.lambda = positive(e)?,
            "y_min" => cfg.grid.y_min = number(e, "a number")?,
            "y_max" => cfg.grid.y_max = number(e, "a number")?,
            "n" => cfg.grid.n = number(e, "an unsigned integer")?,
            _ => {
                let spec = params.iter().find(|p| p.name == k).expect("checked above");
                if e.value == "symbolic" {
                    cfg.bindings.insert(k.to_string(), None);
                } else {
                    let v = constant(e)?;
                    check_kind(e, &v, spec.kind)?;
                    cfg.bindings.insert(k.to_string(), Some(v));
                }
            }
        }
        if k != "claim" {
            cfg.echo.insert(k.to_string(), e.value.clone());
        }
    }
    if command == Command::Verify {
        if !explicit_claims {
            cfg.claims = must_pass_ids().iter().map(|s| s.to_string()).collect();
        }
        let mut seen = std::collections::BTreeSet::new();
        cfg.claims.retain(|c| seen.insert(c.clone()));
        cfg.echo.insert("claim".into(), cfg.claims.join(","));
    }
    validate(&cfg)?;
    cfg.echo.insert("command".into(), command.to_string());
    cfg.echo.insert("seed".into(), cfg.seed.to_string());
    cfg.echo.insert("tol".into(), format!("{:e}", cfg.tol));
    cfg.echo.insert("trials".into(), cfg.trials.to_string());
    cfg.echo.remove("out");
    Ok(cfg)
}

fn names(params: &[kkgeo::ansatz::ParamSpec]) -> String {
    params.iter().map(|p| p.name).collect::<Vec<_>>().join(", ")
}

/// Comma-separated items with their byte offsets.
fn split_list(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut off = 0;
    for part in s.split(',') {
        if !part.is_empty() {
            out.push((off, part));
        }
        off += part.len() + 1;
    }
    out
}

/// Cross-field checks that need the whole configuration.
fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.format == Format::Csv && matches!(cfg.command, Command::Verify | Command::Curvature) {
        return Err(CliError::Validation(format!(
            "csv output is only available for geodesic and fringes, not `{}`",
            cfg.command
        )));
    }
    match cfg.command {
        Command::Curvature => {
            let Some(id) = cfg.ansatz else {
                return Err(CliError::Validation("command `curvature` needs `ansatz=<id>`".into()));
            };
            if matches!(id, AnsatzId::Dirac(_) | AnsatzId::Coupled | AnsatzId::GravityDirac) {
                let get = |n: &str| {
                    cfg.bindings.get(n).cloned().flatten().unwrap_or_else(|| {
                        let sym = if n == "m0" { Symbol::positive(n) } else { Symbol::real(n) };
                        Expr::sym(&sym)
                    })
                };
                dirac_components(&get("p1"), &get("p2"), &get("p3"), &get("m0"))
                    .map_err(|e| CliError::Validation(format!("ansatz `{id}`: {e}")))?;
            }
        }
        Command::Geodesic => {
            let g = &cfg.geodesic;
            if g.steps < 2 {
                return Err(CliError::Validation("`steps` must be at least 2".into()));
            }
            if !(g.tau_end.is_finite() && g.tau_end > 0.0) {
                return Err(CliError::Validation("`tau_end` must be positive".into()));
            }
            if !(g.m0.is_finite() && g.m0 >= 0.0) || g.p.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Validation("momenta must be finite and `m0` non-negative".into()));
            }
        }
        Command::Fringes => {
            if cfg.grid.n < 2
                || !cfg.grid.y_min.is_finite()
                || !cfg.grid.y_max.is_finite()
                || cfg.grid.y_max <= cfg.grid.y_min
            {
                return Err(CliError::Validation("grid needs `n >= 2` and `y_max > y_min`".into()));
            }
        }
        Command::Verify => {}
    }
    Ok(())
}

/// Parse an expression against the standard symbol table.
pub fn parse_expression(text: &str) -> Result<Expr, CliError> {
    parse_expr(text, &SymbolTable::standard()).map_err(|e| match e {
        SymError::Syntax { line, column, message, .. } => {
            CliError::Parse { origin: "<expr>".into(), line, column, message }
        }
        other => CliError::Validation(other.to_string()),
    })
}
