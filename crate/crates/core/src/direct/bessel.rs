//! Modified Bessel functions `I_0`, `I_1`.

use crate::error::{Error, Result};

/// Power series below this argument, asymptotic expansion above.
pub const SERIES_LIMIT: f64 = 15.0;
/// Largest argument accepted by the unscaled functions.
pub const UNSCALED_LIMIT: f64 = 700.0;

fn check(order: u32, x: f64) -> Result<()> {
    if order > 1 {
        return Err(Error::precondition("bessel_i", format!("order {order} not in {{0, 1}}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::precondition("bessel_i", format!("x = {x} must be finite and nonnegative")));
    }
    Ok(())
}

/// `sum_k (x/2)^{2k+nu} / (k! (k+nu)!)`.
pub(crate) fn series(order: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * (k + order as f64));
        sum += term;
        k += 1.0;
    }
    sum
}

/// `e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k`, truncated
/// at the smallest term.
fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1.0f64;
    loop {
        let next = -term * (mu - (2.0 * k - 1.0).powi(2)) / (k * 8.0 * x);
        if next.abs() >= term.abs() || next.abs() < 1e-17 * sum.abs() {
            if next.abs() < term.abs() {
                sum += next;
            }
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Exponentially scaled `e^{-x} I_nu(x)` for `nu` in `{0, 1}`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check(order, x)?;
    Ok(if x <= SERIES_LIMIT {
        series(order, x) * (-x).exp()
    } else {
        asymptotic_scaled(order, x)
    })
}

/// `I_nu(x)` for `nu` in `{0, 1}` and `0 <= x <= 700`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check(order, x)?;
    if x > UNSCALED_LIMIT {
        return Err(Error::Range(format!(
            "I_{order}({x}) overflows; use the exponentially scaled form"
        )));
    }
    Ok(if x <= SERIES_LIMIT {
        series(order, x)
    } else {
        asymptotic_scaled(order, x) * x.exp()
    })
}

/// `I_1(x) / I_0(x)`, computed from the scaled functions for any `x >= 0`.
pub fn bessel_ratio(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(bessel_i_scaled(1, x)? / bessel_i_scaled(0, x)?)
}
