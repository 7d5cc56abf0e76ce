//! Piecewise-smooth boundaries: junction classification, hypothesis checks,
//! and the tubular strips attached to each arc.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::ops::Range;

use crate::bracket::{trace_constant, TraceTermBound};
use crate::error::{Error, Result};
use crate::geometry::arc::{ArcKind, BoundaryArc};
use crate::geometry::profile::{curvature_profile, CurvatureProfile};

/// Samples used for curvature profiles unless a caller asks otherwise.
pub const DEFAULT_PROFILE_SAMPLES: usize = 1025;

const VERTEX_TOL: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-8;
const JET_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JunctionKind {
    /// Tangent and curvature jet continuous: the union is C^4 near the vertex.
    Smooth,
    /// Interior opening angle in (pi, 2pi).
    Reflex,
    /// Interior opening angle in (0, pi]: excluded by the theory.
    Convex,
    /// Tangent continuous but the curvature jet jumps.
    TangentOnly,
    /// The arcs do not meet.
    Open,
}

/// Where the end of one arc meets the start of the next one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Junction {
    /// (incoming arc, outgoing arc)
    pub arcs: (usize, usize),
    pub vertex: [f64; 2],
    pub gap: f64,
    /// Interior opening angle in radians (pi for a tangent-continuous junction).
    pub opening_angle: f64,
    pub kind: JunctionKind,
}

/// Boundary of a planar domain: one or more closed chains of arcs. The
/// domain lies to the left of every arc.
#[derive(Debug, Clone)]
pub struct DomainBoundary {
    arcs: Vec<BoundaryArc>,
    components: Vec<Range<usize>>,
    junctions: Vec<Junction>,
}

impl DomainBoundary {
    /// Build a boundary from closed chains. Each inner vector is one
    /// component, listed in traversal order.
    pub fn from_components(components: Vec<Vec<BoundaryArc>>) -> Result<Self> {
        if components.is_empty() || components.iter().any(|c| c.is_empty()) {
            return Err(Error::MalformedDomain("a boundary needs at least one arc per component".into()));
        }
        let mut arcs = Vec::new();
        let mut ranges = Vec::new();
        for comp in components {
            let start = arcs.len();
            arcs.extend(comp);
            ranges.push(start..arcs.len());
        }
        let junctions = ranges
            .iter()
            .flat_map(|r| {
                let r = r.clone();
                r.clone().map(move |i| (i, if i + 1 == r.end { r.start } else { i + 1 }))
            })
            .map(|(i, j)| classify_junction(&arcs, i, j))
            .collect();
        Ok(DomainBoundary {
            arcs,
            components: ranges,
            junctions,
        })
    }

    pub fn single_component(arcs: Vec<BoundaryArc>) -> Result<Self> {
        Self::from_components(vec![arcs])
    }

    /// Disk of radius `radius` centered at the origin.
    pub fn disk(radius: f64) -> Result<Self> {
        Self::single_component(vec![BoundaryArc::circle([0.0, 0.0], radius, [0.0, TAU])?])
    }

    /// Interior of an axis-aligned ellipse centered at the origin.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::single_component(vec![BoundaryArc::ellipse([0.0, 0.0], [a, b], [0.0, TAU])?])
    }

    /// Smooth star-shaped domain `r(t) = 1 + eps cos(3t)` written as a
    /// trigonometric polynomial in Cartesian coordinates.
    pub fn trefoil(eps: f64) -> Result<Self> {
        let h = 0.5 * eps;
        let arc = BoundaryArc::new(
            ArcKind::Fourier {
                x_cos: vec![0.0, 1.0, h, 0.0, h],
                x_sin: vec![0.0; 5],
                y_cos: vec![0.0; 5],
                y_sin: vec![0.0, 1.0, -h, 0.0, h],
                span: [0.0, TAU],
            },
            false,
        )?;
        Self::single_component(vec![arc])
    }

    /// Union of two unit disks centered at `(-d, 0)` and `(d, 0)`, `0 < d < 1`:
    /// two reflex corners.
    pub fn two_disks(d: f64) -> Result<Self> {
        let phi = (1.0 - d * d).sqrt().atan2(d);
        Self::single_component(vec![
            BoundaryArc::circle([-d, 0.0], 1.0, [phi, TAU - phi])?,
            BoundaryArc::circle([d, 0.0], 1.0, [-(PI - phi), PI - phi])?,
        ])
    }

    /// Intersection of two unit disks centered at `(-d, 0)` and `(d, 0)`:
    /// two convex corners.
    pub fn lens(d: f64) -> Result<Self> {
        let phi = (1.0 - d * d).sqrt().atan2(d);
        Self::single_component(vec![
            BoundaryArc::circle([-d, 0.0], 1.0, [-phi, phi])?,
            BoundaryArc::circle([d, 0.0], 1.0, [PI - phi, PI + phi])?,
        ])
    }

    /// Annulus `inner < |x| < outer`.
    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        Self::from_components(vec![
            vec![BoundaryArc::circle([0.0, 0.0], outer, [0.0, TAU])?],
            vec![BoundaryArc::new(
                ArcKind::Circle {
                    center: [0.0, 0.0],
                    radius: inner,
                    span: [0.0, TAU],
                },
                true,
            )?],
        ])
    }

    pub fn arcs(&self) -> &[BoundaryArc] {
        &self.arcs
    }

    pub fn components(&self) -> &[Range<usize>] {
        &self.components
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    /// Junctions that are genuine corners (reflex or convex).
    pub fn corners(&self) -> impl Iterator<Item = &Junction> {
        self.junctions
            .iter()
            .filter(|j| matches!(j.kind, JunctionKind::Reflex | JunctionKind::Convex))
    }

    /// The same domain scaled by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|r| self.arcs[r.clone()].iter().map(|a| a.scaled(factor)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_components(comps)
    }

    /// `Some(radius)` if the boundary is one full, counter-clockwise circle.
    pub fn as_disk(&self) -> Option<f64> {
        if self.arcs.len() != 1 {
            return None;
        }
        match self.arcs[0].kind() {
            ArcKind::Circle { radius, span, .. }
                if !self.arcs[0].is_reversed() && ((span[1] - span[0]) - TAU).abs() < 1e-12 =>
            {
                Some(*radius)
            }
            _ => None,
        }
    }

    /// Total turning of the tangent along each component (+2pi for a
    /// counter-clockwise outer boundary, -2pi for a hole or an exterior domain).
    pub fn component_turning(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(|r| {
                let mut total = 0.0;
                for i in r.clone() {
                    total += tangent_turning(&self.arcs[i], 512);
                }
                for j in &self.junctions {
                    if r.contains(&j.arcs.0) {
                        total += PI - j.opening_angle;
                    }
                }
                total
            })
            .collect()
    }

    /// Unbounded domain: no component is traversed counter-clockwise.
    pub fn is_exterior(&self) -> bool {
        self.component_turning().iter().all(|t| *t < 0.0)
    }

    pub fn profiles(&self, n_samples: usize) -> Result<Vec<CurvatureProfile>> {
        self.arcs.iter().map(|a| curvature_profile(a, n_samples)).collect()
    }
}

fn tangent_turning(arc: &BoundaryArc, samples: usize) -> f64 {
    let mut total = 0.0;
    let mut prev = arc.at(0.0).tangent;
    for i in 1..=samples {
        let t = arc.at(arc.length() * i as f64 / samples as f64).tangent;
        total += (prev[0] * t[1] - prev[1] * t[0]).atan2(prev[0] * t[0] + prev[1] * t[1]);
        prev = t;
    }
    total
}

fn classify_junction(arcs: &[BoundaryArc], incoming: usize, outgoing: usize) -> Junction {
    let a = &arcs[incoming];
    let b = &arcs[outgoing];
    let end = a.at(a.length());
    let start = b.at(0.0);
    let gap = (end.point[0] - start.point[0]).hypot(end.point[1] - start.point[1]);
    let scale = a.length().max(b.length()).max(1.0);
    let (t_in, t_out) = (end.tangent, start.tangent);
    let turn = (t_in[0] * t_out[1] - t_in[1] * t_out[0]).atan2(t_in[0] * t_out[0] + t_in[1] * t_out[1]);
    let opening_angle = PI - turn;
    let kind = if gap > VERTEX_TOL * scale {
        JunctionKind::Open
    } else if turn.abs() <= ANGLE_TOL {
        let jets_agree = end
            .jet
            .iter()
            .zip(start.jet.iter())
            .all(|(x, y)| (x - y).abs() <= JET_TOL * (1.0 + x.abs().max(y.abs())));
        if jets_agree {
            JunctionKind::Smooth
        } else {
            JunctionKind::TangentOnly
        }
    } else if turn < 0.0 {
        JunctionKind::Reflex
    } else {
        JunctionKind::Convex
    };
    Junction {
        arcs: (incoming, outgoing),
        vertex: end.point,
        gap,
        opening_angle,
        kind,
    }
}

/// One line of a validation report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub unit_speed_residual: f64,
    pub closure_residual: f64,
    pub junctions: Vec<Junction>,
    pub exterior: bool,
    pub gamma_max: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn corner_count(&self) -> usize {
        self.junctions
            .iter()
            .filter(|j| matches!(j.kind, JunctionKind::Reflex | JunctionKind::Convex))
            .count()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        let corners = self.corner_count();
        if corners == 0 {
            writeln!(f, "no corners, γ_max = {}", short(self.gamma_max))?;
        } else {
            writeln!(f, "{corners} corner(s), γ_max = {}", short(self.gamma_max))?;
        }
        if self.exterior {
            writeln!(f, "exterior domain (unbounded)")?;
        }
        Ok(())
    }
}

/// Ten decimals with trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Evaluate every hypothesis without failing; see [`validate_domain`].
pub fn inspect_domain(domain: &DomainBoundary) -> ValidationReport {
    let mut checks = Vec::new();
    let unit_speed_residual = domain
        .arcs
        .iter()
        .map(|a| a.unit_speed_residual(1000))
        .fold(0.0f64, f64::max);
    checks.push(Check {
        name: "unit-speed".into(),
        passed: unit_speed_residual <= 1e-10,
        detail: format!("max ||Γ'(s)| - 1| = {unit_speed_residual:.3e}"),
    });

    for (i, arc) in domain.arcs.iter().enumerate() {
        let sep = arc.min_sample_separation(400);
        checks.push(Check {
            name: format!("injective arc {i}"),
            passed: sep > 0.0,
            detail: format!("minimum sample separation {sep:.3e}"),
        });
    }

    let closure_residual = domain.junctions.iter().map(|j| j.gap).fold(0.0f64, f64::max);
    let open: Vec<_> = domain.junctions.iter().filter(|j| j.kind == JunctionKind::Open).collect();
    checks.push(Check {
        name: "closed".into(),
        passed: open.is_empty(),
        detail: if open.is_empty() {
            format!("all chains close (max vertex mismatch {closure_residual:.3e})")
        } else {
            format!(
                "arc {} does not meet arc {} (gap {:.3e})",
                open[0].arcs.0, open[0].arcs.1, open[0].gap
            )
        },
    });

    for j in &domain.junctions {
        let (name, passed, detail) = match j.kind {
            JunctionKind::Smooth => ("smooth junction", true, "tangent and curvature jet agree".to_string()),
            JunctionKind::Reflex => (
                "reflex corner",
                true,
                format!("opening angle {:.6} rad in (π, 2π)", j.opening_angle),
            ),
            JunctionKind::Convex => (
                "convex corner",
                false,
                format!(
                    "opening angle {:.6} rad at ({:.6}, {:.6}); all corner opening angles must exceed π",
                    j.opening_angle, j.vertex[0], j.vertex[1]
                ),
            ),
            JunctionKind::TangentOnly => (
                "non-C4 junction",
                false,
                "tangent continuous but curvature jet jumps".to_string(),
            ),
            JunctionKind::Open => continue,
        };
        checks.push(Check {
            name: format!("{name} arcs {}->{}", j.arcs.0, j.arcs.1),
            passed,
            detail,
        });
    }

    let gamma_max = gamma_max(domain).unwrap_or(f64::NAN);
    ValidationReport {
        unit_speed_residual,
        closure_residual,
        junctions: domain.junctions.clone(),
        exterior: domain.is_exterior(),
        gamma_max,
        checks,
    }
}

/// Check the hypotheses of the asymptotic theory: closed Lipschitz chains of
/// C^4 arcs whose junctions are either C^4 or reflex corners.
pub fn validate_domain(domain: &DomainBoundary) -> Result<ValidationReport> {
    let report = inspect_domain(domain);
    if let Some(j) = domain.junctions.iter().find(|j| j.kind == JunctionKind::Open) {
        return Err(Error::MalformedDomain(format!(
            "arc {} does not meet arc {} (gap {:.3e})",
            j.arcs.0, j.arcs.1, j.gap
        )));
    }
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        if c.name.starts_with("unit-speed") || c.name.starts_with("injective") {
            return Err(Error::MalformedCurve(format!("{}: {}", c.name, c.detail)));
        }
        return Err(Error::AssumptionViolation(format!("{}: {}", c.name, c.detail)));
    }
    Ok(report)
}

/// Maximal signed curvature over all arcs.
pub fn gamma_max(domain: &DomainBoundary) -> Result<f64> {
    Ok(domain
        .profiles(DEFAULT_PROFILE_SAMPLES)?
        .iter()
        .map(|p| p.kappa_max)
        .fold(f64::NEG_INFINITY, f64::max))
}

struct StripPiece {
    arc: usize,
    polygon: Vec<[f64; 2]>,
    probes: Vec<[f64; 2]>,
    bbox: [f64; 4],
}

const PIECE_SAMPLES: usize = 32;

fn strip_pieces(domain: &DomainBoundary, a: f64) -> Vec<StripPiece> {
    let mut pieces = Vec::new();
    for (k, arc) in domain.arcs.iter().enumerate() {
        let len = arc.length();
        let count = ((len / (4.0 * a)).ceil() as usize).clamp(4, 64);
        for p in 0..count {
            let s0 = len * p as f64 / count as f64;
            let s1 = len * (p + 1) as f64 / count as f64;
            let ds = (s1 - s0) / PIECE_SAMPLES as f64;
            let mut polygon = Vec::with_capacity(2 * PIECE_SAMPLES + 8);
            for i in 0..=PIECE_SAMPLES {
                polygon.push(arc.strip_point(s0 + i as f64 * ds, 0.0));
            }
            for j in 1..4 {
                polygon.push(arc.strip_point(s1, a * j as f64 / 4.0));
            }
            for i in (0..=PIECE_SAMPLES).rev() {
                polygon.push(arc.strip_point(s0 + i as f64 * ds, a));
            }
            for j in (1..4).rev() {
                polygon.push(arc.strip_point(s0, a * j as f64 / 4.0));
            }
            let mut probes = Vec::new();
            for i in 0..PIECE_SAMPLES {
                for &frac in &[0.01, 0.25, 0.5, 0.75, 0.99] {
                    probes.push(arc.strip_point(s0 + (i as f64 + 0.5) * ds, frac * a));
                }
            }
            let bbox = polygon.iter().fold(
                [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
                |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
            );
            pieces.push(StripPiece {
                arc: k,
                polygon,
                probes,
                bbox,
            });
        }
    }
    pieces
}

fn point_in_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn distance_to_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len2 = dx * dx + dy * dy;
            let t = if len2 > 0.0 {
                (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Whether the strips `Phi_k((0, l_k) x (0, a))` of all arcs are pairwise
/// disjoint, judged on sampled pieces of each strip: bounding boxes first,
/// then interior probe points of one piece against the outline of another.
pub fn strips_disjoint(domain: &DomainBoundary, a: f64) -> bool {
    let pieces = strip_pieces(domain, a);
    let margin = 1e-3 * a;
    for (i, p) in pieces.iter().enumerate() {
        for q in pieces.iter().skip(i + 1) {
            if p.bbox[0] > q.bbox[2] || q.bbox[0] > p.bbox[2] || p.bbox[1] > q.bbox[3] || q.bbox[1] > p.bbox[3] {
                continue;
            }
            let hits = |from: &StripPiece, into: &StripPiece| {
                from.probes
                    .iter()
                    .any(|&x| point_in_polygon(x, &into.polygon) && distance_to_polygon(x, &into.polygon) > margin)
            };
            if hits(p, q) || hits(q, p) {
                let _ = (p.arc, q.arc);
                return false;
            }
        }
    }
    true
}

/// Largest admissible strip half-width `a_1`: the minimum over arcs of
/// `(2K)^{-1}` and `(10 K_trace C)^{-1}`, reduced further if sampled strips
/// of neighbouring arcs overlap.
pub fn strip_halfwidth_limit(
    domain: &DomainBoundary,
    profiles: &[CurvatureProfile],
    bound: TraceTermBound,
) -> Result<f64> {
    if profiles.len() != domain.arcs.len() {
        return Err(Error::Geometry(format!(
            "{} profiles supplied for {} arcs",
            profiles.len(),
            domain.arcs.len()
        )));
    }
    let formula = profiles
        .iter()
        .map(|p| analytic_halfwidth_limit(p, bound))
        .fold(f64::INFINITY, f64::min);
    if !formula.is_finite() {
        return Err(Error::Geometry("all arcs are flat; no curvature scale fixes the strip width".into()));
    }
    if strips_disjoint(domain, formula) {
        return Ok(formula);
    }
    // largest passing width below the formula limit
    let mut lo = formula;
    let mut hi = formula;
    let mut found = false;
    for _ in 0..60 {
        lo *= 0.5;
        if strips_disjoint(domain, lo) {
            found = true;
            break;
        }
        hi = lo;
    }
    if !found {
        return Err(Error::Geometry(format!(
            "boundary strips overlap for every tested half-width down to {lo:.3e}"
        )));
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if strips_disjoint(domain, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `min{(2K)^{-1}, (10 K_trace C)^{-1}}` for one arc.
pub fn analytic_halfwidth_limit(profile: &CurvatureProfile, bound: TraceTermBound) -> f64 {
    let k = profile.seminorm_k();
    let k_trace = bound.coefficient(profile);
    let c = trace_constant(profile.length());
    let a0 = if k > 0.0 { 1.0 / (2.0 * k) } else { f64::INFINITY };
    let a_trace = if k_trace > 0.0 { 1.0 / (10.0 * k_trace * c) } else { f64::INFINITY };
    a0.min(a_trace)
}
