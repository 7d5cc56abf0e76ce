//! Gauss-Legendre quadrature and scalar bracketing used across the crate.

use std::sync::OnceLock;

const GL_ORDER: usize = 20;

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule[i] = (-x, w);
            rule[n - 1 - i] = (x, w);
        }
        rule
    })
}

/// Integrate `f` over `[lo, hi]` with one Gauss-Legendre panel.
pub fn gauss_panel(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    gauss_legendre()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy)]
pub struct Bracketed {
    pub root: f64,
    pub iterations: usize,
    pub width: f64,
}

/// Bisection for a function that changes sign on `[lo, hi]`.
///
/// Terminates once the bracket is narrower than `rtol * max(|lo|, |hi|, 1e-300)`
/// or after `max_iter` halvings. Returns `None` if the endpoints share a sign.
pub fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rtol: f64,
    max_iter: usize,
) -> Option<Bracketed> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(Bracketed { root: lo, iterations: 0, width: 0.0 });
    }
    if fhi == 0.0 {
        return Some(Bracketed { root: hi, iterations: 0, width: 0.0 });
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        iterations += 1;
        let fm = f(mid);
        if fm == 0.0 {
            return Some(Bracketed { root: mid, iterations, width: 0.0 });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= rtol * lo.abs().max(hi.abs()).max(1e-300) {
            break;
        }
    }
    Some(Bracketed {
        root: 0.5 * (lo + hi),
        iterations,
        width: (hi - lo).abs(),
    })
}

/// Golden-section search for a maximum of a unimodal function on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre();
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        // degree 39 is the exactness limit of a 20-point rule
        let v = gauss_panel(0.0, 1.0, |x| x.powi(39));
        assert!((v - 1.0 / 40.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_panel_on_smooth_function() {
        let v = gauss_panel(0.0, std::f64::consts::PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_none());
    }

    #[test]
    fn golden_finds_cosine_peak() {
        let (x, fx) = golden_max(f64::cos, -1.0, 0.7, 1e-12);
        assert!(x.abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }
}
