//! Sweeps over `beta` and fits of the two-term expansion
//! `E(beta) ≈ -c2 beta^2 - c1 beta` with a remainder exponent.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::bracket::{BracketContext, BracketMode, BracketOptions};
use crate::direct::disk_exact;
use crate::error::{Error, Result};
use crate::geometry::DomainBoundary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Sharp-root bracket.
    Bracket,
    /// Bracket with the closed-form interval bounds.
    Paper,
    /// Exact disk eigenvalue (disks only).
    Bessel,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bracket => "bracket",
            Method::Paper => "paper",
            Method::Bessel => "bessel",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bracket" => Ok(Method::Bracket),
            "paper" => Ok(Method::Paper),
            "bessel" => Ok(Method::Bessel),
            other => Err(Error::Parse(format!("unknown method `{other}` (bracket, paper, bessel)"))),
        }
    }
}

/// One row of a sweep. Failed rows keep `beta` and `method` and carry the
/// reason in `status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub beta: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub oracle: Option<f64>,
    /// `value + beta^2 + gamma_max beta` with `value` the oracle or the
    /// bracket midpoint.
    pub residual: Option<f64>,
    pub width: Option<f64>,
    pub method: Method,
    /// `"ok"` or `"failed: <reason>"`.
    pub status: String,
}

impl SweepRecord {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }

    /// Oracle value if present, otherwise the bracket midpoint.
    pub fn value(&self) -> Option<f64> {
        self.oracle
            .or_else(|| Some(0.5 * (self.lower? + self.upper?)))
    }

    fn failed(beta: f64, method: Method, reason: impl fmt::Display) -> Self {
        SweepRecord {
            beta,
            lower: None,
            upper: None,
            oracle: None,
            residual: None,
            width: None,
            method,
            status: format!("failed: {reason}"),
        }
    }
}

/// Evaluate every method at every `beta` (records ordered by `beta`, then
/// by method). Per-point failures become failed records; a domain that fails
/// validation is an error.
pub fn sweep(
    domain: &DomainBoundary,
    betas: &[f64],
    methods: &[Method],
    options: &BracketOptions,
) -> Result<Vec<SweepRecord>> {
    let context = BracketContext::new(domain, options.clone())?;
    sweep_with(&context, domain, betas, methods)
}

/// [`sweep`] with a prepared context, which must belong to `domain`.
pub fn sweep_with(
    context: &BracketContext,
    domain: &DomainBoundary,
    betas: &[f64],
    methods: &[Method],
) -> Result<Vec<SweepRecord>> {
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Parse("β list must be strictly increasing".into()));
    }
    let gamma_max = context.gamma_max();
    let disk = domain.as_disk();
    let rows: Vec<Vec<SweepRecord>> = betas
        .par_iter()
        .map(|&beta| {
            methods
                .iter()
                .map(|&method| {
                    let outcome = match method {
                        Method::Bracket | Method::Paper => {
                            let mode = if method == Method::Paper {
                                BracketMode::PaperAsymptotic
                            } else {
                                BracketMode::SharpRoot
                            };
                            context
                                .bounds_with(beta, mode, context.m_at(beta))
                                .map(|b| (Some(b.lower), Some(b.upper), None))
                        }
                        Method::Bessel => match disk {
                            Some(r) => disk_exact(r, beta).map(|e| (None, None, Some(e))),
                            None => Err(Error::precondition("sweep", "the Bessel oracle needs a centred disk")),
                        },
                    };
                    match outcome {
                        Ok((lower, upper, oracle)) => {
                            let mut rec = SweepRecord {
                                beta,
                                lower,
                                upper,
                                oracle,
                                residual: None,
                                width: lower.zip(upper).map(|(l, u)| u - l),
                                method,
                                status: "ok".into(),
                            };
                            rec.residual = rec.value().map(|v| v + beta * beta + gamma_max * beta);
                            rec
                        }
                        Err(e) => SweepRecord::failed(beta, method, e),
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// `n` geometrically spaced values from `start` to `end` inclusive.
pub fn geometric_range(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > start && start.is_finite() && end.is_finite()) {
        return Err(Error::Parse(format!("β range needs 0 < start < end, got {start}:{end}")));
    }
    if n < 2 {
        return Err(Error::Parse(format!("β range needs at least 2 points, got {n}")));
    }
    let ratio = (end / start).ln() / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { end } else { start * (ratio * i as f64).exp() })
        .collect())
}

/// Least-squares line through `(ln beta, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence interval of the slope; `None` with
    /// fewer than three points.
    pub half_width: Option<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub c2: f64,
    pub c1: f64,
    /// Root-mean-square misfit of the two-term model.
    pub rms_residual: f64,
    pub max_residual: f64,
    pub gamma_max: f64,
    /// Slope of `ln|value + beta^2 + gamma_max beta|` against `ln beta`.
    pub remainder_slope: Option<SlopeEstimate>,
    /// Slope of `ln(upper - lower)` against `ln beta`.
    pub width_slope: Option<SlopeEstimate>,
    pub beta_range: [f64; 2],
    pub records: usize,
}

/// Two-sided 97.5% Student t quantiles for 1..=30 degrees of freedom.
const T_975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
    2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
];

fn t_quantile(dof: usize) -> f64 {
    match dof {
        0 => f64::INFINITY,
        d if d <= 30 => T_975[d - 1],
        // Cornish-Fisher correction to the normal quantile
        d => {
            let z: f64 = 1.959964;
            let n = d as f64;
            z + (z.powi(3) + z) / (4.0 * n) + (5.0 * z.powi(5) + 16.0 * z.powi(3) + 3.0 * z) / (96.0 * n * n)
        }
    }
}

/// Ordinary least squares of `y` on `x` with a 95% slope interval.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<SlopeEstimate> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let half_width = (n > 2).then(|| {
        let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        t_quantile(n - 2) * (sse / (n - 2) as f64 / sxx).sqrt()
    });
    Some(SlopeEstimate {
        slope,
        intercept,
        half_width,
        points: n,
    })
}

/// Least squares for `value ≈ -c2 beta^2 - c1 beta` on the successful
/// records with `beta >= beta_max / 100`, by Gram-Schmidt QR on scaled
/// columns. The remainder is measured against the supplied `gamma_max`.
pub fn fit_expansion(records: &[SweepRecord], gamma_max: f64) -> Result<FitResult> {
    let good: Vec<&SweepRecord> = records.iter().filter(|r| r.ok() && r.value().is_some()).collect();
    if good.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 successful records, got {}", good.len())));
    }
    let beta_max = good.iter().map(|r| r.beta).fold(0.0f64, f64::max);
    let used: Vec<&SweepRecord> = good.into_iter().filter(|r| r.beta >= beta_max / 100.0).collect();
    let mut distinct: Vec<f64> = used.iter().map(|r| r.beta).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Fit("fewer than 2 distinct β values".into()));
    }

    let target: Vec<f64> = used.iter().map(|r| -r.value().unwrap()).collect();
    let mut q1: Vec<f64> = used.iter().map(|r| r.beta * r.beta).collect();
    let mut q2: Vec<f64> = used.iter().map(|r| r.beta).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let r11 = norm(&q1);
    q1.iter_mut().for_each(|x| *x /= r11);
    let r12 = dot(&q1, &q2);
    q2.iter_mut().zip(&q1).for_each(|(x, q)| *x -= r12 * q);
    let r22 = norm(&q2);
    if !(r22 > 1e-12 * r11.max(1.0)) {
        return Err(Error::Fit("design matrix is rank deficient".into()));
    }
    q2.iter_mut().for_each(|x| *x /= r22);
    let (b1, b2) = (dot(&q1, &target), dot(&q2, &target));
    let c1 = b2 / r22;
    let c2 = (b1 - r12 * c1) / r11;

    let misfit: Vec<f64> = used
        .iter()
        .zip(&target)
        .map(|(r, t)| t - c2 * r.beta * r.beta - c1 * r.beta)
        .collect();
    let rms_residual = (misfit.iter().map(|m| m * m).sum::<f64>() / misfit.len() as f64).sqrt();
    let max_residual = misfit.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let remainder: Vec<(f64, f64)> = used
        .iter()
        .map(|r| (r.beta, (r.value().unwrap() + r.beta * r.beta + gamma_max * r.beta).abs()))
        .collect();
    let widths: Vec<(f64, f64)> = used.iter().filter_map(|r| Some((r.beta, r.width?))).collect();
    Ok(FitResult {
        c2,
        c1,
        rms_residual,
        max_residual,
        gamma_max,
        remainder_slope: loglog_slope(&remainder),
        width_slope: loglog_slope(&widths),
        beta_range: [distinct[0], *distinct.last().unwrap()],
        records: used.len(),
    })
}
