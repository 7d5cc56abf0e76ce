//! Ground states of `-d^2/du^2` on `(0, a)` with a Robin condition
//! `f'(0) + beta f(0) = 0` and either a Robin far wall `f'(a) - gamma f(a) = 0`
//! or a Dirichlet far wall `f(a) = 0`.
//!
//! Both roots are found in logarithmic variables measuring the distance of
//! `k` from `beta`. That distance is `O(beta e^{-beta a})` and underflows for
//! large `beta a`; the certificates keep its logarithm so that the strict
//! enclosure inequalities stay checkable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::bisect;

const MAX_BISECTIONS: usize = 200;
const ROOT_RTOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelOperator {
    RobinRobin,
    RobinDirichlet,
}

/// Certified principal eigenvalue `E = -k^2` of a model operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateCertificate {
    pub operator: ModelOperator,
    pub a: f64,
    pub beta: f64,
    /// Far-wall Robin coefficient; `None` for the Dirichlet wall.
    pub gamma: Option<f64>,
    pub k: f64,
    pub eigenvalue: f64,
    /// Bisection bracket of the root `k`.
    pub k_bracket: [f64; 2],
    /// `[-k_hi^2, -k_lo^2]` from the root bracket.
    pub eigenvalue_bracket: [f64; 2],
    /// `|E + beta^2|`, possibly underflowed to zero.
    pub gap: f64,
    /// Natural logarithm of `gap`, always finite.
    pub ln_gap: f64,
    /// Analytic interval `[E_lo, E_hi]` containing `E`.
    pub enclosure: [f64; 2],
    /// Set when `gamma <= 0`, which lies outside the analytic statement but
    /// keeps the root unique because `beta > 2|gamma|`.
    pub extended_precondition: bool,
    pub iterations: usize,
    /// Residual of the defining equation in logarithmic form.
    pub residual: f64,
}

impl GroundStateCertificate {
    /// Whether `E` lies strictly inside the analytic enclosure. Decided on
    /// `ln_gap`, so it is meaningful even when `gap` underflows.
    pub fn strictly_inside(&self) -> bool {
        let ln_b2 = 2.0 * self.beta.ln();
        let limit = match self.operator {
            ModelOperator::RobinRobin => 123f64.ln() + ln_b2 - 2.0 * self.beta * self.a,
            ModelOperator::RobinDirichlet => 4f64.ln() + ln_b2 - self.beta * self.a,
        };
        self.ln_gap.is_finite() && self.ln_gap < limit
    }
}

fn check_positive(op: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::precondition(op, format!("{name} = {x} must be positive and finite")))
    }
}

fn robin_robin_preconditions(a: f64, beta: f64, gamma: f64) -> Result<()> {
    const OP: &str = "robin_robin_ground";
    check_positive(OP, "a", a)?;
    check_positive(OP, "β", beta)?;
    if !gamma.is_finite() {
        return Err(Error::precondition(OP, format!("γ = {gamma} must be finite")));
    }
    if beta <= 2.0 * gamma.abs() {
        return Err(Error::precondition(
            OP,
            format!("β > 2|γ| fails: β = {beta}, 2|γ| = {}", 2.0 * gamma.abs()),
        ));
    }
    if beta * a <= 1.0 {
        return Err(Error::precondition(OP, format!("βa > 1 fails: βa = {}", beta * a)));
    }
    Ok(())
}

fn robin_dirichlet_preconditions(a: f64, beta: f64) -> Result<()> {
    const OP: &str = "robin_dirichlet_ground";
    check_positive(OP, "a", a)?;
    check_positive(OP, "β", beta)?;
    if beta * a <= 4.0 / 3.0 {
        return Err(Error::precondition(OP, format!("βa > 4/3 fails: βa = {}", beta * a)));
    }
    Ok(())
}

/// Analytic enclosure of the Robin-Robin ground state:
/// `(-beta^2 (1 + 123 e^{-2 beta a}), -beta^2)`.
pub fn lemma2_bounds(a: f64, beta: f64, gamma: f64) -> Result<(f64, f64)> {
    robin_robin_preconditions(a, beta, gamma)?;
    let b2 = beta * beta;
    Ok((-b2 * (1.0 + 123.0 * (-2.0 * beta * a).exp()), -b2))
}

/// Analytic enclosure of the Robin-Dirichlet ground state:
/// `(-beta^2, -beta^2 (1 - 4 e^{-beta a}))`.
pub fn lemma3_bounds(a: f64, beta: f64) -> Result<(f64, f64)> {
    robin_dirichlet_preconditions(a, beta)?;
    let b2 = beta * beta;
    Ok((-b2, -b2 * (1.0 - 4.0 * (-beta * a).exp())))
}

/// Ground state of `-f''` with `f'(0) + beta f(0) = 0`, `f'(a) - gamma f(a) = 0`.
///
/// Requires `beta a > 1` and `beta > 2|gamma|`, with `beta = 2 gamma` rejected.
/// Writing `k = beta (1 + x)`, the eigenvalue equation
/// `(k + beta)(k + gamma) e^{-ka} = (k - beta)(k - gamma) e^{ka}` becomes
/// `ln(2 + x) - ln x - ln((k - gamma)/(k + gamma)) - 2ka = 0`, strictly
/// decreasing in `y = ln x`.
pub fn robin_robin_ground(a: f64, beta: f64, gamma: f64) -> Result<GroundStateCertificate> {
    let (lo_e, hi_e) = lemma2_bounds(a, beta, gamma)?;
    let f = |y: f64| {
        let x = y.exp();
        let k = beta * (1.0 + x);
        (2.0 + x).ln() - y - ((k - gamma) / (k + gamma)).ln() - 2.0 * k * a
    };
    // x < 41 e^{-2 beta a} under the preconditions
    let mut y_hi = 41f64.ln() - 2.0 * beta * a;
    while f(y_hi) >= 0.0 {
        y_hi += 1.0;
    }
    let mut y_lo = y_hi - 50.0;
    while f(y_lo) <= 0.0 {
        y_lo -= 50.0;
    }
    let root = bisect(f, y_lo, y_hi, ROOT_RTOL, MAX_BISECTIONS).ok_or(Error::Convergence {
        iterations: 0,
        residual: f64::NAN,
    })?;
    let (y, half) = (root.root, 0.5 * root.width);
    let x = y.exp();
    let k_bracket = [beta * (1.0 + (y - half).exp()), beta * (1.0 + (y + half).exp())];
    let k = beta * (1.0 + x);
    Ok(GroundStateCertificate {
        operator: ModelOperator::RobinRobin,
        a,
        beta,
        gamma: Some(gamma),
        k,
        eigenvalue: -k * k,
        k_bracket,
        eigenvalue_bracket: [-k_bracket[1] * k_bracket[1], -k_bracket[0] * k_bracket[0]],
        gap: beta * beta * x * (2.0 + x),
        ln_gap: 2.0 * beta.ln() + y + (2.0 + x).ln(),
        enclosure: [lo_e, hi_e],
        extended_precondition: gamma <= 0.0,
        iterations: root.iterations,
        residual: f(y).abs(),
    })
}

/// Ground state of `-f''` with `f'(0) + beta f(0) = 0`, `f(a) = 0`.
///
/// Requires `beta a > 4/3`. With `k = beta - s` the equation
/// `(beta + k) e^{-ka} = (beta - k) e^{ka}` becomes
/// `ln(2 beta - s) - ln s - 2a(beta - s) = 0`, solved for `z = ln s` with the
/// root `k` confined to `(k_0, beta)`, `k_0 = sqrt(beta^2 - beta/a)`.
pub fn robin_dirichlet_ground(a: f64, beta: f64) -> Result<GroundStateCertificate> {
    let (lo_e, hi_e) = lemma3_bounds(a, beta)?;
    let f = |z: f64| {
        let s = z.exp();
        (2.0 * beta - s).ln() - z - 2.0 * a * (beta - s)
    };
    let k0 = (beta * beta - beta / a).sqrt();
    // s = beta - k0 computed without cancellation
    let s0 = (beta / a) / (beta + k0);
    let z_hi = s0.ln().min((2.0 * beta).ln() - beta * a);
    if f(z_hi) >= 0.0 {
        return Err(Error::Convergence {
            iterations: 0,
            residual: f(z_hi),
        });
    }
    let mut z_lo = z_hi - 50.0;
    while f(z_lo) <= 0.0 {
        z_lo -= 50.0;
    }
    let root = bisect(f, z_lo, z_hi, ROOT_RTOL, MAX_BISECTIONS).ok_or(Error::Convergence {
        iterations: 0,
        residual: f64::NAN,
    })?;
    let (z, half) = (root.root, 0.5 * root.width);
    let s = z.exp();
    let k = beta - s;
    let k_bracket = [beta - (z + half).exp(), beta - (z - half).exp()];
    Ok(GroundStateCertificate {
        operator: ModelOperator::RobinDirichlet,
        a,
        beta,
        gamma: None,
        k,
        eigenvalue: -k * k,
        k_bracket,
        eigenvalue_bracket: [-k_bracket[1] * k_bracket[1], -k_bracket[0] * k_bracket[0]],
        gap: s * (2.0 * beta - s),
        ln_gap: z + (2.0 * beta - s).ln(),
        enclosure: [lo_e, hi_e],
        extended_precondition: false,
        iterations: root.iterations,
        residual: f(z).abs(),
    })
}
