use proptest::prelude::*;
use robin_core::model1d::{lemma2_bounds, lemma3_bounds, robin_dirichlet_ground, robin_robin_ground, ModelOperator};
use robin_core::Error;

/// Plain bisection on the untransformed eigenvalue equation, usable while
/// `e^{ka}` stays representable.
fn bisect_k(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn robin_robin_oracle(a: f64, beta: f64, gamma: f64) -> f64 {
    let f = |k: f64| (k + beta) * (k + gamma) * (-k * a).exp() - (k - beta) * (k - gamma) * (k * a).exp();
    // root lies in (beta, beta (1 + 41 e^{-2 beta a}))
    let k = bisect_k(f, beta * (1.0 + 1e-15), beta * (1.0 + 41.0 * (-2.0 * beta * a).exp()));
    -k * k
}

fn robin_dirichlet_oracle(a: f64, beta: f64) -> f64 {
    let f = |k: f64| (beta + k) * (-k * a).exp() - (beta - k) * (k * a).exp();
    let k = bisect_k(f, (beta * beta - beta / a).sqrt(), beta * (1.0 - 1e-15));
    -k * k
}

#[test]
fn robin_robin_reference_values() {
    // 40-digit references
    for (a, beta, gamma, e) in [
        (0.5, 10.0, 1.0, -100.022_172_890_645_756),
        (0.3, 7.0, 0.5, -52.059_661_163_718_477),
        (1.0, 3.0, 1.0, -9.169_134_621_050_287),
    ] {
        let c = robin_robin_ground(a, beta, gamma).unwrap();
        assert!((c.eigenvalue - e).abs() < 1e-11 * e.abs(), "{a} {beta} {gamma}: {}", c.eigenvalue);
        assert!(c.eigenvalue_bracket[0] <= c.eigenvalue && c.eigenvalue <= c.eigenvalue_bracket[1]);
        assert_eq!(c.operator, ModelOperator::RobinRobin);
    }
}

#[test]
fn robin_dirichlet_reference_values() {
    for (a, beta, e) in [
        (0.5, 10.0, -99.981_825_168_932_774),
        (0.2, 10.0, -91.681_395_612_416_286),
        (1.0, 2.0, -3.667_255_824_496_651),
    ] {
        let c = robin_dirichlet_ground(a, beta).unwrap();
        assert!((c.eigenvalue - e).abs() < 1e-11 * e.abs(), "{a} {beta}: {}", c.eigenvalue);
        assert!(c.strictly_inside());
    }
}

#[test]
fn dirichlet_wall_sits_above_robin_wall() {
    let rr = robin_robin_ground(0.5, 10.0, 1.0).unwrap();
    let rd = robin_dirichlet_ground(0.5, 10.0).unwrap();
    assert!(rr.eigenvalue < -100.0 && -100.0 < rd.eigenvalue);
}

#[test]
fn error_messages_name_the_failed_precondition() {
    let msg = robin_robin_ground(0.4, 2.0, 0.5).unwrap_err().to_string();
    assert!(msg.contains("βa > 1"), "{msg}");
    let msg = robin_robin_ground(1.0, 3.0, 1.5).unwrap_err().to_string();
    assert!(msg.contains("β > 2|γ|"), "{msg}");
    let msg = robin_dirichlet_ground(0.1, 10.0).unwrap_err().to_string();
    assert!(msg.contains("4/3"), "{msg}");
    assert!(matches!(lemma2_bounds(-1.0, 10.0, 1.0), Err(Error::Precondition { .. })));
    assert!(matches!(lemma3_bounds(0.5, f64::NAN), Err(Error::Precondition { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn robin_robin_matches_direct_bisection(
        a in 0.05f64..2.0,
        beta in 2.0f64..40.0,
        frac in 0.0f64..0.99,
    ) {
        prop_assume!(beta * a > 1.0 && beta * a < 30.0);
        let gamma = 0.5 * beta * frac;
        prop_assume!(gamma > 0.0);
        let c = robin_robin_ground(a, beta, gamma).unwrap();
        let e = robin_robin_oracle(a, beta, gamma);
        prop_assert!((c.eigenvalue - e).abs() <= 1e-12 * e.abs() + 1e-12, "{} vs {}", c.eigenvalue, e);
        prop_assert!(c.strictly_inside());
    }

    #[test]
    fn robin_dirichlet_matches_direct_bisection(a in 0.05f64..2.0, beta in 2.0f64..40.0) {
        prop_assume!(beta * a > 4.0 / 3.0 && beta * a < 30.0);
        let c = robin_dirichlet_ground(a, beta).unwrap();
        let e = robin_dirichlet_oracle(a, beta);
        prop_assert!((c.eigenvalue - e).abs() <= 1e-12 * e.abs(), "{} vs {}", c.eigenvalue, e);
    }

    #[test]
    fn enclosures_hold_far_into_underflow(a in 0.5f64..5.0, beta in 50.0f64..5000.0, frac in 0.01f64..0.99) {
        let rr = robin_robin_ground(a, beta, 0.5 * beta * frac).unwrap();
        prop_assert!(rr.strictly_inside());
        prop_assert!(rr.ln_gap.is_finite());
        let rd = robin_dirichlet_ground(a, beta).unwrap();
        prop_assert!(rd.strictly_inside());
    }

    #[test]
    fn eigenvalues_decrease_in_beta(a in 0.2f64..1.5, beta in 10.0f64..100.0, step in 0.01f64..5.0) {
        let gamma = 1.0;
        let e0 = robin_robin_ground(a, beta, gamma).unwrap().eigenvalue;
        let e1 = robin_robin_ground(a, beta + step, gamma).unwrap().eigenvalue;
        prop_assert!(e1 < e0);
        let d0 = robin_dirichlet_ground(a, beta).unwrap().eigenvalue;
        let d1 = robin_dirichlet_ground(a, beta + step).unwrap().eigenvalue;
        prop_assert!(d1 < d0);
    }

    #[test]
    fn wider_interval_lowers_dirichlet_ground_state(a in 0.2f64..1.0, beta in 10.0f64..60.0, grow in 1.01f64..2.0) {
        // domain monotonicity of Dirichlet eigenvalues
        let d0 = robin_dirichlet_ground(a, beta).unwrap().eigenvalue;
        let d1 = robin_dirichlet_ground(a * grow, beta).unwrap().eigenvalue;
        prop_assert!(d1 <= d0);
    }
}
