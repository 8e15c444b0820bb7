use std::fs;
use std::process::{Command, Output};

use kkgeo::verify::{claim_ids, Verdict};
use kkgeo_cli::Report;

fn kkgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kkgeo")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(o: &Output) -> Report {
    Report::from_json(&String::from_utf8_lossy(&o.stdout)).expect("stdout is a report")
}

#[test]
fn empty_claim_selection_is_a_valid_empty_report() {
    let o = kkgeo(&["verify", "claim="]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&o);
    assert!(r.records.is_empty());
    assert_eq!(r.command, "verify");
}

#[test]
fn confirmed_claim_exits_zero() {
    let o = kkgeo(&["verify", "--claim", "kg.reduction", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r.records.len(), 1);
    assert_eq!(r.records[0].verdict, Verdict::Confirmed);
    assert_eq!(r.records[0].seed, 3);
}

#[test]
fn refuted_must_pass_claim_exits_one_with_witness() {
    let o = kkgeo(&["verify", "claim=dirac.stress"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r.records[0].verdict, Verdict::Refuted);
    assert!(r.records[0].witness.is_some());
}

#[test]
fn full_suite_has_one_record_per_claim_in_catalog_order() {
    let o = kkgeo(&["verify", "claim=all"]);
    let r = report(&o);
    let ids: Vec<&str> = r.records.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, claim_ids());
}

#[test]
fn dirac_with_zero_p3_is_a_config_error() {
    let o = kkgeo(&["curvature", "ansatz=dirac1", "p3=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_CONFIG]:"), "{}", stderr(&o));
    assert!(stderr(&o).contains("normalization C undefined"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let o = kkgeo(&["--bogus-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_USAGE]:"));

    let o = kkgeo(&["verify", "claim=no.such.claim"]);
    assert_eq!(o.status.code(), Some(2));

    let o = kkgeo(&["fringes", "format=xml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "# scalar run\ncommand=curvature\nansatz=scalar   # trailing comment\np1=1+\n").unwrap();
    let o = kkgeo(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error[E_PARSE]:"), "{err}");
    assert!(err.contains("run.cfg:4:"), "{err}");
}

#[test]
fn missing_config_file_is_an_io_error() {
    let o = kkgeo(&["--config", "/nonexistent/kkgeo.cfg"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[E_IO]:"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "command=verify claim=kg.reduction seed=1\n").unwrap();
    let o = kkgeo(&["--config", path.to_str().unwrap(), "seed=2", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(report(&o).records[0].seed, 5);
}

#[test]
fn unwritable_output_directory_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    let o = kkgeo(&["verify", "claim=", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[E_IO]:"));
}

#[test]
fn fringes_csv_minima_are_dark() {
    let dir = tempfile::tempdir().unwrap();
    let o = kkgeo(&["fringes", "--format", "csv", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = Report::from_json(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let f = r.fringes.unwrap();
    assert!(f.pass);
    assert!(f.darkest_minimum_ratio < 1e-9);
    assert!(f.max_offset_cells <= 1.0);

    let csv = fs::read_to_string(dir.path().join("fringes.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("y,density"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (y, d) = l.split_once(',').unwrap();
            (y.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    // grid rows plus one row per refined minimum
    assert_eq!(rows.len(), f.grid.n + f.minima.len());
    assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0));
    let peak = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    for m in &f.minima {
        let row = rows.iter().find(|r| r.0 == *m).expect("minimum row present");
        assert!(row.1 < 1e-9 * peak, "{m}: {row:?}");
    }
}

#[test]
fn geodesic_csv_has_header_and_every_step() {
    let o = kkgeo(&["geodesic", "steps=100", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau,re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3,re_x4,im_x4,re_x5,im_x5"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r.split(',').count() == 13));
}

#[test]
fn geodesic_report_passes_its_tolerances() {
    let o = kkgeo(&["geodesic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let g = report(&o).geodesic.unwrap();
    assert!(g.max_deviation < 1e-6);
    assert!(g.interval_law_residual < 1e-6);
    assert!(g.convergence.orders.iter().all(|&q| q >= 3.8), "{:?}", g.convergence);
}

#[test]
fn csv_is_rejected_for_verify() {
    let o = kkgeo(&["verify", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_match_except_timing() {
    let args = ["verify", "claim=kg.reduction,inverse.halfspin,gravity.split.proca", "--seed", "7"];
    let a = report(&kkgeo(&args));
    let b = report(&kkgeo(&args));
    assert_eq!(a.json_without_timing(), b.json_without_timing());
}

#[test]
fn report_round_trips_through_json() {
    let o = kkgeo(&["curvature", "ansatz=scalar", "points=3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let r = Report::from_json(&text).unwrap();
    assert_eq!(r.to_json(), text);
    assert!(r.curvature.unwrap().oracle_pass);
}
