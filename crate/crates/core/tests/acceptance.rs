//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! The process fails when a criterion is red for any reason other than the
//! refutations listed in `KNOWN_REFUTED`, which are genuine sign mismatches
//! in the claimed stress tensor and are reported, not hidden.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kkgeo::ansatz::{AnsatzId, Bindings, ScalarAnsatz};
use kkgeo::curvature::einstein_tensor;
use kkgeo::curvature::oracle::{compare_with_oracle, random_smooth_diagonal, sample_parameters};
use kkgeo::dynamics::{brute_force_minima, scalar_geodesic_study, two_path_fringes, OnShell};
use kkgeo::symcore::{Assignment, Expr, Symbol, ZeroTest};
use kkgeo::tensor::Metric6;
use kkgeo::verify::{check_geodesic_closed_form, claim_ids, default_geometries, run_suite, Outcome, Verdict};
use num_complex::Complex64;

const ORACLE_REL_TOL: f64 = 1e-6;
const ORACLE_POINTS: usize = 20;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);

const IDENTITY_TOL: f64 = 1e-9;
const IDENTITY_TRIALS: usize = 32;
const IDENTITY_SEEDS: [u64; 3] = [0, 1, 2];
const IDENTITY_BUDGET: Duration = Duration::from_secs(120);
const IDENTITY_CLAIMS: [&str; 10] = [
    "ricci.scalar.zero",
    "kg.reduction",
    "maxwell.reduction",
    "fsq.null",
    "proca.reduction",
    "dirac.sol1",
    "dirac.sol2",
    "dirac.sol3",
    "dirac.sol4",
    "dirac.stress",
];
const IDENTITY_CLAIMS_TAIL: [&str; 1] = ["inverse.photon"];
/// Refuted by every seed: the stress tensor built from the field equals
/// minus the claimed momentum product on the 4x4 block and the 55 entry.
const KNOWN_REFUTED: [&str; 5] = ["dirac.sol1", "dirac.sol2", "dirac.sol3", "dirac.sol4", "dirac.stress"];
const DIRAC_FIELD_SUBCHECKS: [&str; 4] = ["a.plane_wave", "b.divergence", "c.invariant", "d.dirac_equation"];

const GEODESIC_STEPS: usize = 1000;
const GEODESIC_DEVIATION_TOL: f64 = 1e-6;
const GEODESIC_MIN_ORDER: f64 = 3.8;
const INTERVAL_TOL: f64 = 1e-6;
const DARKNESS_TOL: f64 = 1e-9;

struct Line {
    pass: bool,
    detail: String,
    /// Red only because of `KNOWN_REFUTED`.
    known: bool,
}

impl Line {
    fn new(pass: bool, detail: String) -> Self {
        Line { pass, detail, known: false }
    }
}

fn zt(seed: u64) -> ZeroTest {
    ZeroTest { trials: IDENTITY_TRIALS, tol: IDENTITY_TOL, seed }
}

fn oracle_equivalence() -> Line {
    let start = Instant::now();
    let zt = ZeroTest::default();
    let build = |id: AnsatzId| id.build(&Bindings::new(), &zt).map_err(|e| e.to_string());
    let metrics: Vec<(&str, Result<Metric6, String>)> = vec![
        ("flat", Ok(Metric6::flat())),
        ("scalar", build(AnsatzId::Scalar)),
        ("photon", build(AnsatzId::Photon)),
        ("proca", build(AnsatzId::Proca)),
        ("random_smooth_diagonal", random_smooth_diagonal(11).map_err(|e| e.to_string())),
    ];
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for (name, g) in metrics {
        let run = g.and_then(|g| {
            let bundle = einstein_tensor(&g, &zt);
            let params = sample_parameters(&g, &Assignment::new(), 5);
            compare_with_oracle(&g, &bundle, &params, ORACLE_POINTS, 5).map_err(|e| e.to_string())
        });
        match run {
            Ok(c) => {
                worst = worst.max(c.worst());
                if c.worst() >= ORACLE_REL_TOL {
                    errors.push(format!("{name}: {:.2e}", c.worst()));
                }
            }
            Err(e) => errors.push(format!("{name}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let pass = errors.is_empty() && elapsed < ORACLE_BUDGET;
    Line::new(
        pass,
        format!(
            "5 metrics x {ORACLE_POINTS} points, worst relative {worst:.2e}, {:.1}s {errors:?}",
            elapsed.as_secs_f64()
        ),
    )
}

fn identity_suite() -> Line {
    let start = Instant::now();
    let ids: Vec<&str> = IDENTITY_CLAIMS.iter().chain(&IDENTITY_CLAIMS_TAIL).copied().collect();
    let mut red = std::collections::BTreeSet::new();
    let mut field_checks_zero = true;
    let mut errors = Vec::new();
    for seed in IDENTITY_SEEDS {
        match run_suite(&ids, &zt(seed)) {
            Ok(reports) => {
                for r in &reports {
                    if r.verdict != Verdict::Confirmed {
                        red.insert(r.id.clone());
                    }
                    if r.id.starts_with("dirac.sol") {
                        field_checks_zero &= DIRAC_FIELD_SUBCHECKS
                            .iter()
                            .all(|n| r.sub_check(n).is_some_and(|s| s.outcome == Outcome::Zero));
                    }
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let elapsed = start.elapsed();
    let in_time = elapsed < IDENTITY_BUDGET;
    let pass = red.is_empty() && errors.is_empty() && in_time;
    let known = !pass
        && errors.is_empty()
        && in_time
        && field_checks_zero
        && red.iter().all(|id| KNOWN_REFUTED.contains(&id.as_str()));
    let mut detail = format!(
        "{} claims x seeds {IDENTITY_SEEDS:?}, tol {IDENTITY_TOL:e}, {IDENTITY_TRIALS} samples, {:.1}s",
        ids.len(),
        elapsed.as_secs_f64()
    );
    if !red.is_empty() {
        detail += &format!("; not confirmed: {red:?}");
    }
    if !field_checks_zero {
        detail += "; a Dirac field sub-check is not zero";
    }
    if known {
        detail +=
            "; Dirac field equations hold; the stress equality has the opposite sign on the 4x4 block and the 55 entry";
    }
    if !errors.is_empty() {
        detail += &format!("; errors: {errors:?}");
    }
    Line { pass, detail, known }
}

fn on_shell() -> OnShell {
    OnShell::new(0.3, -0.2, 0.5, 1.0)
}

fn constants() -> [Complex64; 6] {
    [0.1, -0.2, 0.3, 0.05, 0.0, 0.4].map(|r| Complex64::new(r, 0.0))
}

fn geodesic_closed_form() -> (Line, Line) {
    let sym = |n: &str| Expr::sym(&Symbol::real(n));
    let s = ScalarAnsatz::on_shell(sym("p1"), sym("p2"), sym("p3"), Expr::sym(&Symbol::positive("m0")));
    let k = on_shell();
    let claim = check_geodesic_closed_form(&s, &k, &ZeroTest::default());
    let symbolic = claim.sub_check("symbolic_residual").is_some_and(|c| c.outcome == Outcome::Zero);
    match scalar_geodesic_study(&k, &constants(), 1.0, GEODESIC_STEPS) {
        Ok(study) => {
            let order = study.min_order();
            let geo = Line::new(
                symbolic && study.max_deviation < GEODESIC_DEVIATION_TOL && order >= GEODESIC_MIN_ORDER,
                format!(
                    "symbolic residual {}, deviation {:.2e} at {GEODESIC_STEPS} steps, orders {:.3?}",
                    if symbolic { "zero" } else { "nonzero" },
                    study.max_deviation,
                    study.convergence.orders
                ),
            );
            let r = study.interval_law_residual;
            let interval = Line::new(r < INTERVAL_TOL, format!("max |ds/dx4 - exp(-i phase)| = {r:.2e}"));
            (geo, interval)
        }
        Err(e) => (Line::new(false, format!("integration failed: {e}")), Line::new(false, format!("no path: {e}"))),
    }
}

fn interference() -> Line {
    let mut worst_offset = 0.0f64;
    let mut worst_dark = 0.0f64;
    let mut pass = true;
    let mut errors = Vec::new();
    let geometries = default_geometries();
    for (g, grid) in &geometries {
        match two_path_fringes(g, grid).and_then(|p| Ok((brute_force_minima(g, grid)?, p))) {
            Ok((oracle, p)) => {
                pass &= p.minima.len() == oracle.len() && !oracle.is_empty();
                for (m, o) in p.minima.iter().zip(&oracle) {
                    worst_offset = worst_offset.max((m - o).abs() / grid.step());
                }
                worst_dark = worst_dark.max(p.minima_density.iter().cloned().fold(0.0, f64::max) / p.peak());
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    pass &= errors.is_empty() && worst_offset <= 1.0 && worst_dark < DARKNESS_TOL;
    Line::new(
        pass,
        format!(
            "{} geometries, worst offset {worst_offset:.3} cells, darkest minimum {worst_dark:.2e} x peak {errors:?}",
            geometries.len()
        ),
    )
}

fn honest_reporting() -> Line {
    let measured = ["inverse.halfspin", "gravity.split.scalar", "gravity.split.proca", "gravity.split.dirac"];
    match run_suite(&claim_ids(), &ZeroTest::default()) {
        Ok(reports) => {
            let mut detail = Vec::new();
            let mut pass = true;
            for id in measured {
                match reports.iter().find(|r| r.id == id) {
                    Some(r) => {
                        let ok = r.verdict == Verdict::Conditional
                            && !r.must_pass
                            && r.max_residual.is_finite()
                            && !r.sub_checks.is_empty()
                            && !r.notes.is_empty();
                        pass &= ok;
                        detail.push(format!("{id} {:?} {:.1e}", r.verdict, r.max_residual));
                    }
                    None => {
                        pass = false;
                        detail.push(format!("{id} missing"));
                    }
                }
            }
            Line::new(pass, detail.join(", "))
        }
        Err(e) => Line::new(false, e.to_string()),
    }
}

fn determinism() -> Line {
    let ids = claim_ids();
    let run = || run_suite(&ids, &zt(42)).map(|r| serde_json::to_string_pretty(&r).expect("serializes"));
    let study = || {
        scalar_geodesic_study(&on_shell(), &constants(), 1.0, 200)
            .map(|s| serde_json::to_string(&s).expect("serializes"))
            .map_err(|e| e.to_string())
    };
    match (run(), run(), study(), study()) {
        (Ok(a), Ok(b), Ok(c), Ok(d)) => {
            Line::new(a == b && c == d, format!("suite report {} bytes, geodesic {} bytes", a.len(), c.len()))
        }
        _ => Line::new(false, "a run failed".into()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (geo, interval) = geodesic_closed_form();
    let lines = [
        ("curvature oracle equivalence", oracle_equivalence()),
        ("identity suite", identity_suite()),
        ("geodesic closed form", geo),
        ("interval law", interval),
        ("interference minima", interference()),
        ("honest reporting", honest_reporting()),
        ("determinism", determinism()),
    ];
    let mut unexpected = 0;
    for (i, (name, line)) in lines.iter().enumerate() {
        let tag = if line.pass { "PASS" } else { "FAIL" };
        let known = if line.known { " [known refutation]" } else { "" };
        println!("criterion {} {tag}{known}: {name}: {}", i + 1, line.detail);
        if !line.pass && !line.known {
            unexpected += 1;
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
