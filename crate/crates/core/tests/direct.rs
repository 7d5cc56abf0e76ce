use std::f64::consts::TAU;
use std::sync::Arc;

use proptest::prelude::*;
use robin_core::direct::{
    bessel_i, bessel_i_scaled, bessel_ratio, disk_exact, disk_ground, strip_fd_ground, BoundaryCondition,
    StripDiscretization, StripGrid, SERIES_LIMIT, UNSCALED_LIMIT,
};
use robin_core::geometry::{AnalyticCurvature, CurvatureProfile};
use robin_core::Error;

fn profile(length: f64, jet: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> CurvatureProfile {
    CurvatureProfile::build(Arc::new(AnalyticCurvature::new(length, jet)), 257).unwrap()
}

#[test]
fn scaled_bessel_reference_values() {
    // 40-digit references for e^{-x} I_0(x), e^{-x} I_1(x)
    for (x, i0, i1) in [
        (0.5, 0.645_035_270_449_150_07, 0.156_420_803_184_871_70),
        (10.0, 0.127_833_337_163_428_61, 0.121_262_681_384_455_52),
        (50.0, 0.056_561_626_647_454_193, 0.055_993_123_892_895_400),
        (800.0, 0.014_106_945_005_869_184, 0.014_098_125_406_526_997),
    ] {
        assert!((bessel_i_scaled(0, x).unwrap() - i0).abs() < 1e-14 * i0, "I0 at {x}");
        assert!((bessel_i_scaled(1, x).unwrap() - i1).abs() < 1e-14 * i1, "I1 at {x}");
    }
}

#[test]
fn series_and_asymptotic_branches_agree_at_the_switch() {
    for order in [0, 1] {
        let below = bessel_i_scaled(order, SERIES_LIMIT).unwrap();
        let above = bessel_i_scaled(order, SERIES_LIMIT * (1.0 + f64::EPSILON)).unwrap();
        assert!((below - above).abs() < 1e-13 * below);
    }
}

#[test]
fn unscaled_bessel_range() {
    assert!((bessel_i(0, 10.0).unwrap() - 2815.716_628_466_254).abs() < 1e-9);
    assert!(bessel_i(0, UNSCALED_LIMIT).unwrap().is_finite());
    assert!(matches!(bessel_i(1, 701.0), Err(Error::Range(_))));
    assert!(matches!(bessel_i(2, 1.0), Err(Error::Precondition { .. })));
    assert!(bessel_ratio(1e6).unwrap() < 1.0);
}

#[test]
fn disk_reference_values() {
    for (r, beta, e) in [
        (1.0, 100.0, -10_100.502_525_448_123),
        (1.0, 20.0, -420.513_187_272_855_32),
        (2.0, 5.0, -27.632_022_298_255_929),
        (0.5, 3.0, -17.665_825_168_028_038),
    ] {
        let g = disk_ground(r, beta).unwrap();
        assert!((g.eigenvalue - e).abs() < 1e-12 * e.abs(), "R={r} β={beta}: {}", g.eigenvalue);
        assert!(g.residual < 1e-13);
    }
    assert!(disk_exact(0.0, 1.0).is_err());
}

#[test]
fn flat_strip_matches_separated_solution() {
    let flat = profile(1.0, |_| [0.0; 3]);
    let transverse = robin_core::model1d::robin_dirichlet_ground(0.5, 10.0).unwrap().eigenvalue;
    let exact = std::f64::consts::PI.powi(2) + transverse;
    let r = strip_fd_ground(&flat, 0.5, 10.0, BoundaryCondition::Dirichlet, StripGrid::square(64)).unwrap();
    let pair = r.richardson.unwrap();
    assert!((pair.extrapolated - exact).abs() < (pair.fine - exact).abs());
    assert!(((r.eigenvalue - exact) / exact).abs() < 2e-3);
}

#[test]
fn circle_strip_neumann_approaches_disk() {
    // full circle, Neumann: the annulus 1/2 < r < 1 with a Neumann inner wall
    let circle = profile(TAU, |_| [1.0, 0.0, 0.0]);
    let r = strip_fd_ground(&circle, 0.5, 10.0, BoundaryCondition::Neumann, StripGrid::square(64)).unwrap();
    let disk = disk_exact(1.0, 10.0).unwrap();
    let extrapolated = r.richardson.unwrap().extrapolated;
    assert!(((extrapolated - disk) / disk).abs() < 2e-4, "{extrapolated} vs {disk}");
}

#[test]
fn grid_outside_diffeomorphism_regime_is_rejected() {
    let tight = profile(1.0, |_| [3.0, 0.0, 0.0]);
    let err = StripDiscretization::new(&tight, 0.4, 10.0, BoundaryCondition::Neumann, StripGrid::square(8)).unwrap_err();
    assert!(matches!(err, Error::Discretization(_)), "{err}");
}

fn wavy(c0: f64, c1: f64, len: f64) -> CurvatureProfile {
    let w = TAU / len;
    profile(len, move |s| {
        [c0 + c1 * (w * s).cos(), -c1 * w * (w * s).sin(), -c1 * w * w * (w * s).cos()]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn disk_scaling_identity(r in 0.2f64..5.0, beta in 0.5f64..200.0) {
        let lhs = disk_exact(r, beta).unwrap();
        let rhs = disk_exact(1.0, r * beta).unwrap() / (r * r);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * beta * beta + 1e-12 * lhs.abs());
    }

    #[test]
    fn disk_lies_below_half_plane_value(beta in 5.0f64..1000.0) {
        // positive boundary curvature lowers the energy
        prop_assert!(disk_exact(1.0, beta).unwrap() < -beta * beta);
    }

    #[test]
    fn discrete_form_is_symmetric(c0 in -0.8f64..0.8, c1 in -0.5f64..0.5, len in 0.5f64..4.0, neumann in any::<bool>()) {
        let p = wavy(c0, c1, len);
        let bc = if neumann { BoundaryCondition::Neumann } else { BoundaryCondition::Dirichlet };
        let d = StripDiscretization::new(&p, 0.3, 8.0, bc, StripGrid { n_s: 12, n_u: 7 }).unwrap();
        let q = d.quadratic_form();
        let scale = (0..q.dim()).map(|i| q.entry(i, i).abs()).fold(0.0f64, f64::max);
        prop_assert!(q.max_asymmetry() <= 1e-13 * scale);
        prop_assert!(d.mass().iter().all(|m| *m > 0.0));
    }

    #[test]
    fn dirichlet_ground_state_lies_above_neumann(c0 in -0.8f64..0.8, c1 in -0.5f64..0.5, beta in 5.0f64..30.0) {
        let p = wavy(c0, c1, 2.0);
        let grid = StripGrid { n_s: 16, n_u: 16 };
        let n = strip_fd_ground(&p, 0.3, beta, BoundaryCondition::Neumann, grid).unwrap();
        let d = strip_fd_ground(&p, 0.3, beta, BoundaryCondition::Dirichlet, grid).unwrap();
        prop_assert!(d.eigenvalue >= n.eigenvalue);
        prop_assert!(n.residual <= 1e-8 * n.eigenvalue.abs());
    }
}
