use proptest::prelude::*;
use robin_core::asympt::{fit_expansion, geometric_range, loglog_slope, sweep, Method, SweepRecord};
use robin_core::bracket::BracketOptions;
use robin_core::geometry::DomainBoundary;

fn oracle_record(beta: f64, value: f64) -> SweepRecord {
    SweepRecord {
        beta,
        lower: None,
        upper: None,
        oracle: Some(value),
        residual: None,
        width: None,
        method: Method::Bessel,
        status: "ok".into(),
    }
}

#[test]
fn disk_sweep_sandwiches_the_oracle() {
    let disk = DomainBoundary::disk(1.0).unwrap();
    let betas = geometric_range(20.0, 2000.0, 12).unwrap();
    let records = sweep(&disk, &betas, &[Method::Bessel, Method::Bracket], &BracketOptions::default()).unwrap();
    assert_eq!(records.len(), 24);
    for pair in records.chunks(2) {
        let (oracle, bracket) = (&pair[0], &pair[1]);
        assert_eq!((oracle.method, bracket.method), (Method::Bessel, Method::Bracket));
        let e = oracle.oracle.unwrap();
        assert!(bracket.lower.unwrap() <= e && e <= bracket.upper.unwrap(), "β = {}", oracle.beta);
        // E + β² + β → -1/2 for the unit disk
        assert!((oracle.residual.unwrap() + 0.5).abs() < 0.02);
    }
}

#[test]
fn failures_become_records_and_fit_uses_survivors() {
    let ellipse = DomainBoundary::ellipse(1.5, 1.0).unwrap();
    let betas = [1.0, 100.0, 200.0, 400.0, 800.0, 1600.0];
    let records = sweep(&ellipse, &betas, &[Method::Bracket, Method::Bessel], &BracketOptions::default()).unwrap();
    let failed: Vec<_> = records.iter().filter(|r| !r.ok()).collect();
    // β = 1 is below threshold; the ellipse has no Bessel oracle
    assert_eq!(failed.len(), 1 + betas.len());
    assert!(failed.iter().all(|r| r.status.starts_with("failed: ")));
    let bracket: Vec<SweepRecord> = records.into_iter().filter(|r| r.method == Method::Bracket).collect();
    let fit = fit_expansion(&bracket, 1.5).unwrap();
    assert_eq!(fit.records, 5);
    assert!((fit.c2 - 1.0).abs() < 0.01, "{fit:?}");
}

#[test]
fn remainder_slope_is_stable_when_low_betas_are_dropped() {
    let disk = DomainBoundary::disk(1.0).unwrap();
    let betas = geometric_range(100.0, 10_000.0, 16).unwrap();
    let records = sweep(&disk, &betas, &[Method::Bracket], &BracketOptions::default()).unwrap();
    let all = fit_expansion(&records, 1.0).unwrap();
    let upper = fit_expansion(&records[4..], 1.0).unwrap();
    // the width carries a constant offset and drifts more; only the remainder is held to this
    let (p_all, p_upper) = (all.remainder_slope.unwrap().slope, upper.remainder_slope.unwrap().slope);
    assert!((p_all - p_upper).abs() <= 0.05, "{p_all} vs {p_upper}");
}

#[test]
fn invalid_ranges_are_rejected() {
    assert!(geometric_range(320.0, 20.0, 10).is_err());
    assert!(geometric_range(0.0, 20.0, 10).is_err());
    assert!(geometric_range(1.0, 20.0, 1).is_err());
    assert!("lanczos".parse::<Method>().is_err());
    assert_eq!("paper".parse::<Method>().unwrap(), Method::Paper);
}

proptest! {
    #[test]
    fn geometric_range_endpoints_and_ratio(start in 0.1f64..100.0, span in 1.5f64..1e3, n in 2usize..40) {
        let end = start * span;
        let v = geometric_range(start, end, n).unwrap();
        prop_assert_eq!(v.len(), n);
        prop_assert_eq!(v[0], start);
        prop_assert_eq!(v[n - 1], end);
        let ratio = span.powf(1.0 / (n - 1) as f64);
        for w in v.windows(2) {
            prop_assert!((w[1] / w[0] - ratio).abs() < 1e-10 * ratio);
        }
    }

    #[test]
    fn power_laws_have_exact_slopes(p in -2.0f64..3.0, c in 0.01f64..100.0, n in 3usize..20) {
        let pts: Vec<(f64, f64)> = geometric_range(10.0, 1e4, n).unwrap().into_iter().map(|b| (b, c * b.powf(p))).collect();
        let s = loglog_slope(&pts).unwrap();
        prop_assert!((s.slope - p).abs() < 1e-9);
        prop_assert!(s.half_width.unwrap() < 1e-6);
        prop_assert_eq!(s.points, n);
    }

    #[test]
    fn two_term_fit_recovers_exact_coefficients(c2 in 0.5f64..2.0, c1 in -3.0f64..3.0) {
        let records: Vec<SweepRecord> = geometric_range(10.0, 500.0, 12)
            .unwrap()
            .into_iter()
            .map(|b| oracle_record(b, -c2 * b * b - c1 * b))
            .collect();
        let fit = fit_expansion(&records, c1).unwrap();
        prop_assert!((fit.c2 - c2).abs() < 1e-10 * c2);
        prop_assert!((fit.c1 - c1).abs() < 1e-7);
        prop_assert!(fit.max_residual < 1e-6);
    }
}
