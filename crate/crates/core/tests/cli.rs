use std::fs;
use std::path::PathBuf;
use std::process::Command;

use robin_core::asympt::Method;
use robin_core::bracket::{BracketMode, BracketResult};
use robin_core::cli::{run, FitReport};
use robin_core::report::{from_json, read_sweep_csv};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

/// Exit code, stdout, stderr.
fn robin(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("robin").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn validate_exit_codes() {
    let (code, out, _) = robin(&["validate", "--builtin", "disk"]);
    assert_eq!(code, 0);
    assert!(out.contains("no corners, γ_max = 1\n"), "{out}");

    let (code, out, err) = robin(&["validate", "--domain", &fixture("lens.toml")]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] convex corner arcs 0->1"));
    assert!(err.contains("opening angle"));

    let (code, _, err) = robin(&["validate", "--domain", &fixture("malformed.toml")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 6") && err.contains("radus"), "{err}");

    let (code, _, _) = robin(&["validate", "--domain", "/nonexistent/domain.toml"]);
    assert_eq!(code, 2);
    let (code, _, _) = robin(&["validate", "--builtin", "disk", "--domain", &fixture("lens.toml")]);
    assert_eq!(code, 2);
    let (code, _, _) = robin(&["validate", "--builtin", "disk", "--radius", "-1"]);
    assert_eq!(code, 2);
}

#[test]
fn bracket_json_round_trips() {
    let (code, out, _) = robin(&["bracket", "--builtin", "disk", "--beta", "100"]);
    assert_eq!(code, 0);
    let result: BracketResult = from_json(&out).unwrap();
    assert!(result.lower < -10_100.5 && -10_100.5 < result.upper);
    let again = serde_json::to_string_pretty(&result).unwrap();
    assert_eq!(again.trim_end(), out.trim_end());
    let back: BracketResult = from_json(&again).unwrap();
    assert_eq!(back, result);
}

#[test]
fn bracket_modes_and_threshold() {
    let (code, _, err) = robin(&["bracket", "--builtin", "disk", "--beta", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("below threshold 3K+1+4/(3a)"), "{err}");

    let (code, out, _) = robin(&["bracket", "--builtin", "disk", "--beta", "300", "--mode", "paper"]);
    assert_eq!(code, 0);
    let r: BracketResult = from_json(&out).unwrap();
    assert_eq!(r.mode, BracketMode::PaperAsymptotic);
    assert!(r.beta_a.is_some());
    assert!(out.contains("\"mode\": \"paper-asymptotic\""));

    let (code, out, _) = robin(&["bracket", "--builtin", "disk", "--beta", "300", "--M", "3", "--critical-M"]);
    assert_eq!(code, 0);
    let r: BracketResult = from_json(&out).unwrap();
    assert_eq!(r.arcs[0].m, 3);
}

#[test]
fn bracket_appends_csv_lines() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("results.csv");
    let table_arg = table.to_str().unwrap();
    for beta in ["50", "100"] {
        let (code, _, _) = robin(&["bracket", "--builtin", "disk", "--beta", beta, "--append-csv", table_arg]);
        assert_eq!(code, 0);
    }
    let text = fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 3);
    let records = read_sweep_csv(text.as_bytes()).unwrap();
    assert_eq!(records.iter().map(|r| r.beta).collect::<Vec<_>>(), [50.0, 100.0]);
}

#[test]
fn sweep_writes_table_fit_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, fit, svg) = (dir.path().join("s.csv"), dir.path().join("fit.json"), dir.path().join("s.svg"));
    let (code, _, _) = robin(&[
        "sweep", "--builtin", "disk", "--beta-range", "20:320:10", "--methods", "bessel,bracket",
        "--out", csv.to_str().unwrap(), "--fit-out", fit.to_str().unwrap(), "--plot", svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# robin sweep, unix time "));
    assert!(text.lines().nth(1).unwrap().starts_with("beta,lower,upper,oracle,residual,width,method"));
    let records = read_sweep_csv(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 20);

    let report: FitReport = from_json(&fs::read_to_string(&fit).unwrap()).unwrap();
    let bessel = report.fits.iter().find(|f| f.method == Method::Bessel).unwrap();
    assert!((bessel.fit.c2 - 1.0).abs() < 1e-3);
    assert!(bessel.p_hat.is_some());

    let plot = fs::read_to_string(&svg).unwrap();
    assert_eq!(plot.matches("<polyline class=\"series\"").count(), 2);
}

#[test]
fn sweep_output_is_deterministic_without_header() {
    let args = ["sweep", "--builtin", "fourier", "--beta", "60,120,240", "--no-header"];
    let (c1, first, _) = robin(&args);
    let (c2, second, _) = robin(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(first, second);
    assert!(first.starts_with("beta,"));
}

#[test]
fn json_sweep_round_trips_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let (code, _, _) = robin(&["sweep", "--builtin", "disk", "--beta", "25.3,77.7", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&path).unwrap();
    let records: Vec<robin_core::asympt::SweepRecord> = from_json(&text).unwrap();
    let csv_path = dir.path().join("s.csv");
    robin_core::report::write_sweep_csv(&records, fs::File::create(&csv_path).unwrap(), None).unwrap();
    let reread = read_sweep_csv(fs::File::open(&csv_path).unwrap()).unwrap();
    for (a, b) in records.iter().zip(&reread) {
        assert_eq!(a.lower.map(f64::to_bits), b.lower.map(f64::to_bits));
        assert_eq!(a.oracle.map(f64::to_bits), b.oracle.map(f64::to_bits));
        assert_eq!(a.residual.map(f64::to_bits), b.residual.map(f64::to_bits));
    }
}

#[test]
fn fit_reads_stored_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let (code, _, _) = robin(&["sweep", "--builtin", "disk", "--beta-range", "10:320:10", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = robin(&["fit", "--builtin", "disk", "--input", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report: FitReport = from_json(&out).unwrap();
    assert_eq!(report.fits.len(), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(robin(&["sweep", "--builtin", "disk", "--beta-range", "320:20:10"]).0, 2);
    assert_eq!(robin(&["sweep", "--builtin", "disk", "--beta-range", "20:320"]).0, 2);
    assert_eq!(robin(&["sweep", "--builtin", "disk", "--beta", "50,40"]).0, 2);
    assert_eq!(robin(&["sweep", "--builtin", "disk", "--methods", "lanczos", "--beta", "50"]).0, 2);
    assert_eq!(robin(&["bracket", "--builtin", "disk"]).0, 2);
    assert_eq!(robin(&["bracket", "--builtin", "disk", "--beta", "50", "--mode", "exact"]).0, 2);
    assert_eq!(robin(&["frobnicate"]).0, 2);
    assert_eq!(robin(&["--help"]).0, 0);
}

#[test]
fn disk_exact_command() {
    let (code, out, _) = robin(&["disk-exact", "--beta", "100"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"eigenvalue\": -10100.502525448"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_robin");
    let status = Command::new(bin).args(["validate", "--domain", &fixture("lens.toml")]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = Command::new(bin).args(["validate", "--builtin", "annulus"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
}
