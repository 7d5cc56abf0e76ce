//! Principal Robin eigenvalue of a disk by separation of variables.

use serde::{Deserialize, Serialize};

use crate::direct::bessel::bessel_ratio;
use crate::error::{Error, Result};
use crate::quad::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGround {
    pub radius: f64,
    pub beta: f64,
    /// Root of `k I_1(kR) = beta I_0(kR)`.
    pub k: f64,
    pub eigenvalue: f64,
    /// `|k I_1(kR)/I_0(kR) - beta| / beta` at the returned root.
    pub residual: f64,
}

/// Radial ground state `E = -k^2` of the Robin Laplacian on the disk of
/// radius `radius`.
///
/// `k I_1(kR)/I_0(kR)` increases from 0 and stays below `k`, so the root lies
/// above `beta`; the upper end of the bracket is found by doubling.
pub fn disk_ground(radius: f64, beta: f64) -> Result<DiskGround> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::precondition("disk_exact", format!("R = {radius} must be positive")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::precondition("disk_exact", format!("β = {beta} must be positive")));
    }
    let f = |k: f64| k * bessel_ratio(k * radius).unwrap_or(f64::NAN) - beta;
    let lo = beta;
    let mut hi = beta + 1.0 / radius + 1.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    let root = bisect(f, lo, hi, 1e-16, 200).ok_or(Error::Convergence {
        iterations: 0,
        residual: f64::NAN,
    })?;
    let k = root.root;
    Ok(DiskGround {
        radius,
        beta,
        k,
        eigenvalue: -k * k,
        residual: f(k).abs() / beta,
    })
}

/// Principal Robin eigenvalue of the disk of radius `radius`.
pub fn disk_exact(radius: f64, beta: f64) -> Result<f64> {
    disk_ground(radius, beta).map(|g| g.eigenvalue)
}
