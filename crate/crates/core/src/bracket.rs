//! Two-sided enclosures of the principal eigenvalue from boundary strips.
//!
//! Each arc carries a strip of half-width `a`. In tubular coordinates the
//! strip problem is squeezed between two separable forms on `M` equal
//! sub-rectangles: a Neumann-cut lower form with the Robin parameter
//! `beta + kappa^+_j / 2` and a Robin far wall of slope `K`, and a
//! Dirichlet-cut upper form with `beta + kappa^-_j / 2`. Their ground states
//! are tangential constants plus the 1D model ground states of [`crate::model1d`].
//!
//! The domain enclosure is `min(0, min_k lower_k) <= E <= min_k upper_k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{
    analytic_halfwidth_limit, strip_halfwidth_limit, validate_domain, CurvatureProfile, DomainBoundary,
    DEFAULT_PROFILE_SAMPLES,
};
use crate::model1d::{robin_dirichlet_ground, robin_robin_ground, GroundStateCertificate};

/// Default strip half-width as a fraction of the admissible limit `a_1`.
pub const DEFAULT_HALFWIDTH_FRACTION: f64 = 0.99;
/// Default relative padding applied to both ends of a domain enclosure.
pub const DEFAULT_WIDENING: f64 = 1e-9;
const V_GRID: usize = 64;
const PARTITION_SAMPLES: usize = 33;

/// Which curvature-derivative bound multiplies the end-face trace term.
///
/// The end faces of a strip carry `kappa'` at the two arc ends only, so the
/// endpoint values already bound that term. `Seminorm` replaces them by the
/// full seminorm `K`, which is always larger and gives smaller strips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceTermBound {
    #[default]
    Endpoint,
    Seminorm,
}

impl TraceTermBound {
    pub fn coefficient(self, profile: &CurvatureProfile) -> f64 {
        match self {
            TraceTermBound::Endpoint => profile.end_slope(),
            TraceTermBound::Seminorm => profile.seminorm_k(),
        }
    }
}

/// Constant of the end-point trace inequality on `(0, l)`:
/// `|f(0)|^2 + |f(l)|^2 <= C (||f'||^2 + ||f||^2)` with `C = 2 + 4/l`.
pub fn trace_constant(length: f64) -> f64 {
    2.0 + 4.0 / length
}

/// Bound on the strip potential, `v(a) = 4aK + 20a^2K^2 + K^2`.
pub fn potential_bound(a: f64, k: f64) -> f64 {
    4.0 * a * k + 20.0 * a * a * k * k + k * k
}

/// Effective potential of the strip form in tubular coordinates.
pub fn strip_potential(jet: [f64; 3], u: f64) -> f64 {
    let [kappa, dk, ddk] = jet;
    let w = 1.0 - u * kappa;
    u * ddk / (2.0 * w.powi(3)) + 5.0 * u * u * dk * dk / (4.0 * w.powi(4)) + kappa * kappa / (4.0 * w * w)
}

/// Validity threshold `3K + 1 + 4/(3a)`.
pub fn validity_threshold(k: f64, a: f64) -> f64 {
    3.0 * k + 1.0 + 4.0 / (3.0 * a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransverseConstants {
    /// Curvature seminorm `K`.
    pub k: f64,
    /// Trace constant `C`.
    pub c: f64,
    /// Coefficient of the end-face trace term (`K` or the end slopes).
    pub k_trace: f64,
    pub trace_bound: TraceTermBound,
    /// Potential bound `v`.
    pub v: f64,
    /// Largest `|V|` seen on the verification grid.
    pub v_grid_max: f64,
    pub a: f64,
    /// Per-arc limit `min{(2K)^{-1}, (10 K_trace C)^{-1}}`; `None` if unbounded.
    pub a1: Option<f64>,
    pub beta_min: f64,
}

/// Constants of the strip of half-width `a` attached to one arc.
pub fn transverse_constants(
    profile: &CurvatureProfile,
    a: f64,
    bound: TraceTermBound,
) -> Result<TransverseConstants> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::precondition("transverse_constants", format!("a = {a} must be positive")));
    }
    let limit = analytic_halfwidth_limit(profile, bound);
    if a >= limit {
        return Err(Error::Validity {
            arc: None,
            interval: None,
            reason: format!("strip half-width a = {a} must lie in (0, a₁ = {limit})"),
        });
    }
    let k = profile.seminorm_k();
    let v = potential_bound(a, k);
    let len = profile.length();
    let mut v_grid_max: f64 = 0.0;
    for i in 0..V_GRID {
        let jet = profile.jet(len * i as f64 / (V_GRID - 1) as f64);
        for j in 0..V_GRID {
            let u = a * j as f64 / (V_GRID - 1) as f64;
            v_grid_max = v_grid_max.max(strip_potential(jet, u).abs());
        }
    }
    if v_grid_max > v * (1.0 + 1e-12) {
        return Err(Error::InternalConstant(format!(
            "|V| reaches {v_grid_max} on the strip grid but the bound is v = {v}"
        )));
    }
    Ok(TransverseConstants {
        k,
        c: trace_constant(len),
        k_trace: bound.coefficient(profile),
        trace_bound: bound,
        v,
        v_grid_max,
        a,
        a1: limit.is_finite().then_some(limit),
        beta_min: validity_threshold(k, a),
    })
}

/// Uniform partition of an arc into `M` intervals with curvature bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub m: usize,
    pub delta: f64,
    pub kappa_minus: Vec<f64>,
    pub kappa_plus: Vec<f64>,
}

/// Bound `kappa` on each of `m` equal intervals. Sample extremes are widened
/// by the smaller of `h sup|kappa'| / 2` and `h^2 sup|kappa''| / 8`.
pub fn partition(profile: &CurvatureProfile, m: usize) -> Result<Partition> {
    if m == 0 {
        return Err(Error::precondition("partition", "M must be at least 1"));
    }
    let len = profile.length();
    let delta = len / m as f64;
    let h = delta / (PARTITION_SAMPLES - 1) as f64;
    let pad = (0.5 * h * profile.sup_abs[1]).min(0.125 * h * h * profile.sup_abs[2]);
    let mut kappa_minus = Vec::with_capacity(m);
    let mut kappa_plus = Vec::with_capacity(m);
    for j in 0..m {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..PARTITION_SAMPLES {
            let s = (j as f64 * delta + i as f64 * h).min(len);
            let kappa = profile.jet(s)[0];
            lo = lo.min(kappa);
            hi = hi.max(kappa);
        }
        kappa_minus.push(lo - pad);
        kappa_plus.push(hi + pad);
    }
    Ok(Partition {
        m,
        delta,
        kappa_minus,
        kappa_plus,
    })
}

/// How the interval count grows with `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MSchedule {
    /// `M = ceil(beta^{1/3})`.
    #[default]
    Standard,
    /// `M = ceil(beta^{1/4})`, for a non-degenerate interior curvature maximum.
    Critical,
}

/// Smallest integer `M` with `M^3 >= beta` (standard) or `M^4 >= beta` (critical).
pub fn auto_m(beta: f64, schedule: MSchedule) -> usize {
    let power = match schedule {
        MSchedule::Standard => 3,
        MSchedule::Critical => 4,
    };
    let mut m = beta.max(1.0).powf(1.0 / power as f64).floor().max(1.0) as usize;
    while (m.saturating_sub(1) as f64).powi(power) >= beta && m > 1 {
        m -= 1;
    }
    while (m as f64).powi(power) < beta {
        m += 1;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketMode {
    /// Interval ground states from the exact model roots.
    #[default]
    SharpRoot,
    /// Closed-form interval bounds `-beta^2 - kappa beta -/+ ...`, valid past `beta_a`.
    PaperAsymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBounds {
    pub index: usize,
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    /// Lower bound on the Neumann-cut interval ground state.
    pub lower: f64,
    /// Upper bound on the Dirichlet-cut interval ground state.
    pub upper: f64,
    pub lower_certificate: Option<GroundStateCertificate>,
    pub upper_certificate: Option<GroundStateCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripBounds {
    pub lower: f64,
    pub upper: f64,
    pub intervals: Vec<IntervalBounds>,
    pub beta_a: Option<f64>,
}

/// Smallest `beta_a >= max(3/a, K)` past which
/// `(beta + K/2)^2 e^{-2a(beta - K/2)} + 4 (beta + K/2)^2 e^{-a(beta - K/2)} <= 1/beta`.
/// `beta` times the left side decreases on that range.
pub fn paper_threshold(a: f64, k: f64) -> f64 {
    let g = |beta: f64| {
        let lead = 2.0 * (beta + 0.5 * k).ln() + beta.ln();
        let t = a * (beta - 0.5 * k);
        (lead - 2.0 * t).exp() + 4.0 * (lead - t).exp() - 1.0
    };
    let lo = (3.0 / a).max(k);
    if g(lo) <= 0.0 {
        return lo;
    }
    let mut hi = 2.0 * lo;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn interval_error(j: usize, e: Error) -> Error {
    match e {
        Error::Precondition { op, failed } => Error::Validity {
            arc: None,
            interval: Some(j),
            reason: format!("{op}: {failed}"),
        },
        other => other,
    }
}

/// Lower and upper strip bounds
/// `E^-_M = -v - 4a K_trace C + min_j E^{-,j}` and
/// `E^+_M = 4 pi^2 M^2 / l^2 + v + min_j E^{+,j}`.
pub fn strip_bounds(
    profile: &CurvatureProfile,
    constants: &TransverseConstants,
    part: &Partition,
    beta: f64,
    mode: BracketMode,
) -> Result<StripBounds> {
    let TransverseConstants {
        k, a, beta_min, ..
    } = *constants;
    if !(beta > beta_min) {
        return Err(Error::Validity {
            arc: None,
            interval: None,
            reason: format!("β = {beta} below threshold 3K+1+4/(3a) = {beta_min}"),
        });
    }
    let beta_a = match mode {
        BracketMode::SharpRoot => None,
        BracketMode::PaperAsymptotic => {
            let ba = paper_threshold(a, k);
            if !(beta > ba + beta_min) {
                return Err(Error::Validity {
                    arc: None,
                    interval: None,
                    reason: format!(
                        "paper-asymptotic bounds need β > β_a + 3K+1+4/(3a) = {} (β_a = {ba})",
                        ba + beta_min
                    ),
                });
            }
            Some(ba)
        }
    };
    let intervals = (0..part.m)
        .map(|j| {
            let (km, kp) = (part.kappa_minus[j], part.kappa_plus[j]);
            let (bp, bm) = (beta + 0.5 * kp, beta + 0.5 * km);
            match mode {
                BracketMode::SharpRoot => {
                    let lc = robin_robin_ground(a, bp, k).map_err(|e| interval_error(j, e))?;
                    let uc = robin_dirichlet_ground(a, bm).map_err(|e| interval_error(j, e))?;
                    Ok(IntervalBounds {
                        index: j,
                        kappa_minus: km,
                        kappa_plus: kp,
                        lower: lc.eigenvalue_bracket[0],
                        upper: uc.eigenvalue_bracket[1],
                        lower_certificate: Some(lc),
                        upper_certificate: Some(uc),
                    })
                }
                BracketMode::PaperAsymptotic => {
                    // the closed forms absorb kappa^2/4 into K^2/4 and the
                    // exponential remainders into 1/beta
                    let rem_lo = 123.0 * bp * bp * (-2.0 * a * bp).exp();
                    let rem_hi = 4.0 * bm * bm * (-a * bm).exp();
                    if kp.abs() > k || rem_lo > 1.0 / beta || rem_hi > 1.0 / beta {
                        return Err(Error::Validity {
                            arc: None,
                            interval: Some(j),
                            reason: format!(
                                "closed-form remainders exceed 1/β (|κ⁺| = {}, remainders {rem_lo:e}, {rem_hi:e})",
                                kp.abs()
                            ),
                        });
                    }
                    Ok(IntervalBounds {
                        index: j,
                        kappa_minus: km,
                        kappa_plus: kp,
                        lower: -beta * beta - kp * beta - 0.25 * k * k - 1.0 / beta,
                        upper: -beta * beta - km * beta + 1.0 / beta,
                        lower_certificate: None,
                        upper_certificate: None,
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let min_lower = intervals.iter().map(|i| i.lower).fold(f64::INFINITY, f64::min);
    let min_upper = intervals.iter().map(|i| i.upper).fold(f64::INFINITY, f64::min);
    let len = profile.length();
    Ok(StripBounds {
        lower: lower_from_parts(constants.v, a, constants.k_trace, constants.c, min_lower),
        upper: upper_from_parts(constants.v, part.m, len, min_upper),
        intervals,
        beta_a,
    })
}

/// `-v - 4 a K_trace C + min_j E^{-,j}`.
pub fn lower_from_parts(v: f64, a: f64, k_trace: f64, c: f64, min_interval: f64) -> f64 {
    -v - 4.0 * a * k_trace * c + min_interval
}

/// `4 pi^2 M^2 / l^2 + v + min_j E^{+,j}`.
pub fn upper_from_parts(v: f64, m: usize, length: f64, min_interval: f64) -> f64 {
    let m = m as f64;
    4.0 * PI * PI * m * m / (length * length) + v + min_interval
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketOptions {
    /// Strip half-width; defaults to `0.99 a_1`.
    pub a: Option<f64>,
    /// Interval count per arc; defaults to the schedule.
    pub m: Option<usize>,
    pub mode: BracketMode,
    pub schedule: MSchedule,
    pub trace_bound: TraceTermBound,
    /// Relative padding of the final enclosure.
    pub widening: f64,
    pub profile_samples: usize,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            a: None,
            m: None,
            mode: BracketMode::SharpRoot,
            schedule: MSchedule::Standard,
            trace_bound: TraceTermBound::Endpoint,
            widening: DEFAULT_WIDENING,
            profile_samples: DEFAULT_PROFILE_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcBracket {
    pub arc: usize,
    pub length: f64,
    pub m: usize,
    pub delta: f64,
    pub constants: TransverseConstants,
    pub lower: f64,
    pub upper: f64,
    pub intervals: Vec<IntervalBounds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketResult {
    pub beta: f64,
    pub mode: BracketMode,
    pub schedule: MSchedule,
    /// No component is traversed counter-clockwise: the domain is unbounded.
    pub exterior: bool,
    pub a: f64,
    pub a1: f64,
    pub gamma_max: f64,
    /// Certified lower bound (after widening).
    pub lower: f64,
    /// Certified upper bound (after widening).
    pub upper: f64,
    pub widening: f64,
    pub beta_a: Option<f64>,
    pub arcs: Vec<ArcBracket>,
}

impl BracketResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.upper + self.lower)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Validated domain with curvature profiles and strip width fixed, reusable
/// across many values of `beta`.
#[derive(Debug, Clone)]
pub struct BracketContext {
    profiles: Vec<CurvatureProfile>,
    options: BracketOptions,
    a: f64,
    a1: f64,
    gamma_max: f64,
    exterior: bool,
}

impl BracketContext {
    pub fn new(domain: &DomainBoundary, options: BracketOptions) -> Result<Self> {
        let report = validate_domain(domain)?;
        let profiles = domain.profiles(options.profile_samples)?;
        let a1 = strip_halfwidth_limit(domain, &profiles, options.trace_bound)?;
        let a = match options.a {
            None => DEFAULT_HALFWIDTH_FRACTION * a1,
            Some(a) if a > 0.0 && a < a1 => a,
            Some(a) => {
                return Err(Error::Validity {
                    arc: None,
                    interval: None,
                    reason: format!("strip half-width a = {a} must lie in (0, a₁ = {a1})"),
                })
            }
        };
        let gamma_max = profiles.iter().map(|p| p.kappa_max).fold(f64::NEG_INFINITY, f64::max);
        Ok(BracketContext {
            profiles,
            options,
            a,
            a1,
            gamma_max,
            exterior: report.exterior,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn gamma_max(&self) -> f64 {
        self.gamma_max
    }

    pub fn profiles(&self) -> &[CurvatureProfile] {
        &self.profiles
    }

    pub fn options(&self) -> &BracketOptions {
        &self.options
    }

    /// Interval count used at `beta`.
    pub fn m_at(&self, beta: f64) -> usize {
        self.options.m.unwrap_or_else(|| auto_m(beta, self.options.schedule))
    }

    pub fn bounds(&self, beta: f64) -> Result<BracketResult> {
        self.bounds_with(beta, self.options.mode, self.m_at(beta))
    }

    /// Bounds at an explicit mode and interval count.
    pub fn bounds_with(&self, beta: f64, mode: BracketMode, m: usize) -> Result<BracketResult> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::precondition("domain_bounds", format!("β = {beta} must be positive")));
        }
        let a = self.a;
        let arcs = self
            .profiles
            .par_iter()
            .enumerate()
            .map(|(index, profile)| {
                let constants = transverse_constants(profile, a, self.options.trace_bound).map_err(|e| e.with_arc(index))?;
                let part = partition(profile, m)?;
                let sb = strip_bounds(profile, &constants, &part, beta, mode).map_err(|e| e.with_arc(index))?;
                Ok((
                    ArcBracket {
                        arc: index,
                        length: profile.length(),
                        m,
                        delta: part.delta,
                        constants,
                        lower: sb.lower,
                        upper: sb.upper,
                        intervals: sb.intervals,
                    },
                    sb.beta_a,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let lower = arcs.iter().map(|(b, _)| b.lower).fold(0.0f64, f64::min);
        let upper = arcs.iter().map(|(b, _)| b.upper).fold(f64::INFINITY, f64::min);
        let beta_a = arcs.iter().filter_map(|(_, x)| *x).reduce(f64::max);
        let w = self.options.widening;
        Ok(BracketResult {
            beta,
            mode,
            schedule: self.options.schedule,
            exterior: self.exterior,
            a,
            a1: self.a1,
            gamma_max: self.gamma_max,
            lower: lower - w * lower.abs(),
            upper: upper + w * upper.abs(),
            widening: w,
            beta_a,
            arcs: arcs.into_iter().map(|(b, _)| b).collect(),
        })
    }
}

/// Enclosure of the principal eigenvalue of `domain` at `beta`.
pub fn domain_bounds(domain: &DomainBoundary, beta: f64, options: &BracketOptions) -> Result<BracketResult> {
    BracketContext::new(domain, options.clone())?.bounds(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AnalyticCurvature;
    use std::sync::Arc;

    fn profile_of(src: AnalyticCurvature) -> CurvatureProfile {
        CurvatureProfile::build(Arc::new(src), 257).unwrap()
    }

    #[test]
    fn auto_m_examples() {
        assert_eq!(auto_m(1000.0, MSchedule::Standard), 10);
        assert_eq!(auto_m(1000.0, MSchedule::Critical), 6);
        assert_eq!(auto_m(1.0, MSchedule::Standard), 1);
        assert_eq!(auto_m(1.0, MSchedule::Critical), 1);
        assert_eq!(auto_m(27.0, MSchedule::Standard), 3);
        assert_eq!(auto_m(27.000001, MSchedule::Standard), 4);
        assert_eq!(auto_m(16.0, MSchedule::Critical), 2);
    }

    #[test]
    fn lower_assembly_arithmetic() {
        assert!((lower_from_parts(2.0, 0.1, 1.0, 3.0, -100.0) + 103.2).abs() < 1e-12);
    }

    #[test]
    fn trace_constant_for_unit_circle() {
        assert!((trace_constant(2.0 * PI) - 2.6366).abs() < 1e-4);
    }

    #[test]
    fn flat_strip_constants_and_upper_bound() {
        let p = profile_of(AnalyticCurvature::constant(1.0, 0.0));
        let c = transverse_constants(&p, 0.5, TraceTermBound::Seminorm).unwrap();
        assert_eq!(c.v, 0.0);
        assert_eq!(c.a1, None);
        let part = partition(&p, 1).unwrap();
        let sb = strip_bounds(&p, &c, &part, 10.0, BracketMode::SharpRoot).unwrap();
        let pi = robin_dirichlet_ground(0.5, 10.0).unwrap().eigenvalue;
        assert!((sb.upper - (4.0 * PI * PI + pi)).abs() < 1e-9);
        assert!(sb.upper > -60.52 && sb.upper < -57.82, "{}", sb.upper);
    }

    #[test]
    fn cosine_partition_quarters() {
        let p = profile_of(AnalyticCurvature::new(2.0 * PI, |s| [s.cos(), -s.sin(), -s.cos()]));
        let part = partition(&p, 4).unwrap();
        assert!((part.kappa_plus[0] - 1.0).abs() < 1e-3 && part.kappa_plus[0] >= 1.0);
        assert!(part.kappa_minus[0].abs() < 1e-3 && part.kappa_minus[0] <= 0.0);
    }

    #[test]
    fn below_threshold_is_rejected() {
        let d = DomainBoundary::disk(1.0).unwrap();
        let err = domain_bounds(&d, 1.0, &BracketOptions::default()).unwrap_err();
        assert!(err.to_string().contains("below threshold 3K+1+4/(3a)"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn paper_threshold_satisfies_inequality() {
        for &(a, k) in &[(0.495, 1.0), (0.03, 1.0), (0.2, 3.0)] {
            let ba = paper_threshold(a, k);
            for f in [1.0, 1.5, 3.0, 10.0] {
                let b = ba * f;
                let lhs = (b + k / 2.0).powi(2) * ((-2.0 * a * (b - k / 2.0)).exp() + 4.0 * (-a * (b - k / 2.0)).exp());
                assert!(lhs <= 1.0 / b * (1.0 + 1e-12), "a={a} k={k} b={b}");
            }
        }
    }
}
