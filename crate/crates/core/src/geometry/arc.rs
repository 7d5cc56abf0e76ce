//! Analytic boundary arcs and their arc-length reparametrization.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::quad::gauss_panel;

/// Closed-form curve families. All are real-analytic, so derivatives of
/// every order are available exactly in the native parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ArcKind {
    /// `center + radius (cos t, sin t)` for `t` in `span`.
    Circle {
        center: [f64; 2],
        radius: f64,
        span: [f64; 2],
    },
    /// `center + (a cos t, b sin t)` for `t` in `span`.
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        span: [f64; 2],
    },
    /// Trigonometric polynomial in each coordinate,
    /// `x(t) = sum_n x_cos[n] cos(nt) + x_sin[n] sin(nt)` (likewise `y`).
    Fourier {
        x_cos: Vec<f64>,
        x_sin: Vec<f64>,
        y_cos: Vec<f64>,
        y_sin: Vec<f64>,
        span: [f64; 2],
    },
}

impl ArcKind {
    fn span(&self) -> [f64; 2] {
        match self {
            ArcKind::Circle { span, .. } | ArcKind::Ellipse { span, .. } | ArcKind::Fourier { span, .. } => {
                *span
            }
        }
    }

    /// Derivatives of orders 0..=4 with respect to the native parameter.
    fn derivatives(&self, t: f64) -> [[f64; 2]; 5] {
        let mut out = [[0.0; 2]; 5];
        match self {
            ArcKind::Circle { center, radius, .. } => {
                for (m, d) in out.iter_mut().enumerate() {
                    let phase = t + m as f64 * FRAC_PI_2;
                    *d = [radius * phase.cos(), radius * phase.sin()];
                }
                out[0][0] += center[0];
                out[0][1] += center[1];
            }
            ArcKind::Ellipse {
                center, semi_axes, ..
            } => {
                for (m, d) in out.iter_mut().enumerate() {
                    let phase = t + m as f64 * FRAC_PI_2;
                    *d = [semi_axes[0] * phase.cos(), semi_axes[1] * phase.sin()];
                }
                out[0][0] += center[0];
                out[0][1] += center[1];
            }
            ArcKind::Fourier {
                x_cos,
                x_sin,
                y_cos,
                y_sin,
                ..
            } => {
                for n in 0..x_cos.len() {
                    let nf = n as f64;
                    let mut scale = 1.0;
                    for (m, d) in out.iter_mut().enumerate() {
                        if n == 0 && m > 0 {
                            break;
                        }
                        let phase = nf * t + m as f64 * FRAC_PI_2;
                        let (sp, cp) = phase.sin_cos();
                        d[0] += scale * (x_cos[n] * cp + x_sin[n] * sp);
                        d[1] += scale * (y_cos[n] * cp + y_sin[n] * sp);
                        scale *= nf;
                    }
                }
            }
        }
        out
    }

    fn scaled(&self, factor: f64) -> ArcKind {
        let sc = |v: &Vec<f64>| v.iter().map(|c| c * factor).collect::<Vec<_>>();
        match self {
            ArcKind::Circle {
                center,
                radius,
                span,
            } => ArcKind::Circle {
                center: [center[0] * factor, center[1] * factor],
                radius: radius * factor,
                span: *span,
            },
            ArcKind::Ellipse {
                center,
                semi_axes,
                span,
            } => ArcKind::Ellipse {
                center: [center[0] * factor, center[1] * factor],
                semi_axes: [semi_axes[0] * factor, semi_axes[1] * factor],
                span: *span,
            },
            ArcKind::Fourier {
                x_cos,
                x_sin,
                y_cos,
                y_sin,
                span,
            } => ArcKind::Fourier {
                x_cos: sc(x_cos),
                x_sin: sc(x_sin),
                y_cos: sc(y_cos),
                y_sin: sc(y_sin),
                span: *span,
            },
        }
    }

    fn check(&self) -> Result<()> {
        let [t0, t1] = self.span();
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::MalformedCurve(format!(
                "parameter span [{t0}, {t1}] must be finite and increasing"
            )));
        }
        match self {
            ArcKind::Circle { radius, center, .. } => {
                if !(radius.is_finite() && *radius > 0.0) || !center.iter().all(|c| c.is_finite()) {
                    return Err(Error::MalformedCurve(format!("circle radius {radius} must be positive")));
                }
            }
            ArcKind::Ellipse {
                semi_axes, center, ..
            } => {
                if !semi_axes.iter().all(|a| a.is_finite() && *a > 0.0) || !center.iter().all(|c| c.is_finite())
                {
                    return Err(Error::MalformedCurve(format!(
                        "ellipse semi-axes {semi_axes:?} must be positive"
                    )));
                }
            }
            ArcKind::Fourier {
                x_cos,
                x_sin,
                y_cos,
                y_sin,
                ..
            } => {
                let n = x_cos.len();
                if n < 2 || x_sin.len() != n || y_cos.len() != n || y_sin.len() != n {
                    return Err(Error::MalformedCurve(
                        "fourier arc needs four coefficient arrays of equal length >= 2".into(),
                    ));
                }
                if !x_cos.iter().chain(x_sin).chain(y_cos).chain(y_sin).all(|c| c.is_finite()) {
                    return Err(Error::MalformedCurve("non-finite fourier coefficient".into()));
                }
            }
        }
        Ok(())
    }
}

/// Geometric state of an arc at one arc-length position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPoint {
    pub point: [f64; 2],
    /// Unit tangent.
    pub tangent: [f64; 2],
    /// Signed curvature and its first two arc-length derivatives.
    pub jet: [f64; 3],
}

impl ArcPoint {
    /// Inward unit normal (tangent rotated by +90 degrees).
    pub fn normal(&self) -> [f64; 2] {
        [-self.tangent[1], self.tangent[0]]
    }
}

/// A C^4 boundary piece parametrized by arc length on `[0, length]`.
///
/// The interior of the domain lies to the left of the direction of travel,
/// so the inward normal is the tangent rotated counter-clockwise.
#[derive(Debug, Clone)]
pub struct BoundaryArc {
    kind: ArcKind,
    reversed: bool,
    param_len: f64,
    length: f64,
    // (native offset tau, arc length) at panel boundaries
    knots: Vec<(f64, f64)>,
}

const MAX_PANELS: usize = 1 << 14;

impl BoundaryArc {
    pub fn new(kind: ArcKind, reversed: bool) -> Result<Self> {
        kind.check()?;
        let [t0, t1] = kind.span();
        let mut arc = BoundaryArc {
            kind,
            reversed,
            param_len: t1 - t0,
            length: 0.0,
            knots: Vec::new(),
        };
        // speed must be finite and bounded away from zero
        let probe = 512;
        for i in 0..=probe {
            let tau = arc.param_len * i as f64 / probe as f64;
            let d = arc.derivatives(tau);
            if d.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::MalformedCurve(format!("non-finite derivative at parameter {tau}")));
            }
            if (d[1][0].hypot(d[1][1])) < 1e-12 {
                return Err(Error::MalformedCurve(format!("vanishing speed at parameter {tau}")));
            }
        }
        arc.build_knots()?;
        Ok(arc)
    }

    pub fn circle(center: [f64; 2], radius: f64, span: [f64; 2]) -> Result<Self> {
        Self::new(
            ArcKind::Circle {
                center,
                radius,
                span,
            },
            false,
        )
    }

    pub fn ellipse(center: [f64; 2], semi_axes: [f64; 2], span: [f64; 2]) -> Result<Self> {
        Self::new(
            ArcKind::Ellipse {
                center,
                semi_axes,
                span,
            },
            false,
        )
    }

    pub fn kind(&self) -> &ArcKind {
        &self.kind
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Arc length.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// The same curve with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.kind.scaled(factor), self.reversed)
    }

    /// Derivatives with respect to the traversal offset `tau` in `[0, param_len]`.
    fn derivatives(&self, tau: f64) -> [[f64; 2]; 5] {
        let [t0, t1] = self.kind.span();
        if self.reversed {
            let mut d = self.kind.derivatives(t1 - tau);
            for (m, v) in d.iter_mut().enumerate() {
                if m % 2 == 1 {
                    v[0] = -v[0];
                    v[1] = -v[1];
                }
            }
            d
        } else {
            self.kind.derivatives(t0 + tau)
        }
    }

    fn speed(&self, tau: f64) -> f64 {
        let d = self.derivatives(tau);
        d[1][0].hypot(d[1][1])
    }

    fn build_knots(&mut self) -> Result<()> {
        let integrate = |panels: usize| -> Vec<(f64, f64)> {
            let h = self.param_len / panels as f64;
            let mut knots = Vec::with_capacity(panels + 1);
            let mut s = 0.0;
            knots.push((0.0, 0.0));
            for i in 0..panels {
                let lo = i as f64 * h;
                let hi = if i + 1 == panels { self.param_len } else { lo + h };
                s += gauss_panel(lo, hi, |t| self.speed(t));
                knots.push((hi, s));
            }
            knots
        };
        let mut panels = 8;
        let mut coarse = integrate(panels);
        loop {
            panels *= 2;
            let fine = integrate(panels);
            let (lc, lf) = (coarse.last().unwrap().1, fine.last().unwrap().1);
            if (lc - lf).abs() <= 1e-14 * lf || panels >= MAX_PANELS {
                if (lc - lf).abs() > 1e-10 * lf {
                    return Err(Error::MalformedCurve(format!(
                        "arc length quadrature did not settle ({lc} vs {lf})"
                    )));
                }
                self.length = lf;
                self.knots = fine;
                return Ok(());
            }
            coarse = fine;
        }
    }

    /// Native traversal offset for arc length `s` (Newton inversion of the
    /// cached length table).
    fn offset_at(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.length);
        let idx = self
            .knots
            .partition_point(|&(_, sk)| sk <= s)
            .clamp(1, self.knots.len() - 1);
        let (ta, sa) = self.knots[idx - 1];
        let (tb, sb) = self.knots[idx];
        let mut tau = if sb > sa { ta + (tb - ta) * (s - sa) / (sb - sa) } else { ta };
        for _ in 0..50 {
            let resid = sa + gauss_panel(ta, tau, |t| self.speed(t)) - s;
            let step = resid / self.speed(tau);
            tau = (tau - step).clamp(ta, tb);
            if step.abs() <= 1e-15 * self.param_len {
                break;
            }
        }
        tau
    }

    /// Arc length of the traversal prefix up to native offset `tau`.
    pub fn length_to_offset(&self, tau: f64) -> f64 {
        let tau = tau.clamp(0.0, self.param_len);
        let idx = self
            .knots
            .partition_point(|&(tk, _)| tk <= tau)
            .clamp(1, self.knots.len() - 1);
        let (ta, sa) = self.knots[idx - 1];
        sa + gauss_panel(ta, tau, |t| self.speed(t))
    }

    /// Point, unit tangent and curvature jet at arc length `s`.
    pub fn at(&self, s: f64) -> ArcPoint {
        let d = self.derivatives(self.offset_at(s));
        let [x1, y1] = d[1];
        let [x2, y2] = d[2];
        let [x3, y3] = d[3];
        let [x4, y4] = d[4];
        let n0 = x1 * y2 - x2 * y1;
        let n1 = x1 * y3 - x3 * y1;
        let n2 = x2 * y3 + x1 * y4 - x4 * y1 - x3 * y2;
        let p0 = x1 * x1 + y1 * y1;
        let p1 = 2.0 * (x1 * x2 + y1 * y2);
        let p2 = 2.0 * (x2 * x2 + x1 * x3 + y2 * y2 + y1 * y3);
        let sigma = p0.sqrt();
        let p32 = p0 * sigma;
        let p52 = p32 * p0;
        let p72 = p52 * p0;
        let kappa = n0 / p32;
        let k_t = n1 / p32 - 1.5 * n0 * p1 / p52;
        let k_tt = n2 / p32 - 3.0 * n1 * p1 / p52 - 1.5 * n0 * p2 / p52 + 3.75 * n0 * p1 * p1 / p72;
        let sigma_t = p1 / (2.0 * sigma);
        let k_s = k_t / sigma;
        let k_ss = (k_tt * sigma - k_t * sigma_t) / (sigma * sigma * sigma);
        ArcPoint {
            point: d[0],
            tangent: [x1 / sigma, y1 / sigma],
            jet: [kappa, k_s, k_ss],
        }
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        self.derivatives(self.offset_at(s))[0]
    }

    pub fn start(&self) -> [f64; 2] {
        self.derivatives(0.0)[0]
    }

    pub fn end(&self) -> [f64; 2] {
        self.derivatives(self.param_len)[0]
    }

    /// Whether the arc alone closes up (start and end coincide).
    pub fn is_closed(&self) -> bool {
        let (a, b) = (self.start(), self.end());
        (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-10 * self.length.max(1.0)
    }

    /// Tubular map `(s, u) -> Gamma(s) + u nu(s)`.
    pub fn strip_point(&self, s: f64, u: f64) -> [f64; 2] {
        let p = self.at(s);
        let n = p.normal();
        [p.point[0] + u * n[0], p.point[1] + u * n[1]]
    }

    /// Largest deviation of `|d Gamma / ds|` from one over `samples` interior
    /// points, measured by sixth-order central differences of the
    /// reparametrized curve.
    pub fn unit_speed_residual(&self, samples: usize) -> f64 {
        let h = (1e-3 * self.length).min(1e-3);
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            let s = 3.0 * h + (self.length - 6.0 * h) * (i as f64 + 0.5) / samples as f64;
            worst = worst.max(self.speed_by_differences(s, h));
        }
        worst
    }

    /// `| |Gamma'(s)| - 1 |` via a sixth-order central difference with step `h`.
    pub fn speed_by_differences(&self, s: f64, h: f64) -> f64 {
        const W: [(f64, f64); 3] = [(1.0, 45.0), (2.0, -9.0), (3.0, 1.0)];
        let (mut dx, mut dy) = (0.0, 0.0);
        for (m, w) in W {
            let (a, b) = (self.point(s + m * h), self.point(s - m * h));
            dx += w * (a[0] - b[0]);
            dy += w * (a[1] - b[1]);
        }
        (dx.hypot(dy) / (60.0 * h) - 1.0).abs()
    }

    /// Minimum distance between sampled points at distinct parameters
    /// (the closing point of a closed arc is excluded).
    pub fn min_sample_separation(&self, samples: usize) -> f64 {
        let pts: Vec<[f64; 2]> = (0..samples)
            .map(|i| self.point(self.length * i as f64 / samples as f64))
            .collect();
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best = best.min((pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]));
            }
        }
        best
    }
}
