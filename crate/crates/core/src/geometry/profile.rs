//! Sampled curvature data with rigorous-looking supremum bounds.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::arc::BoundaryArc;
use crate::quad::golden_max;

/// Anything that can report the curvature jet `(kappa, kappa', kappa'')`
/// along an arc-length interval `[0, length]`.
pub trait CurvatureSource: Send + Sync {
    fn length(&self) -> f64;
    fn jet(&self, s: f64) -> [f64; 3];
}

impl CurvatureSource for BoundaryArc {
    fn length(&self) -> f64 {
        BoundaryArc::length(self)
    }

    fn jet(&self, s: f64) -> [f64; 3] {
        self.at(s).jet
    }
}

type JetFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// Curvature given directly as a closed-form function of arc length, used
/// for model strips (flat segments, prescribed curvature laws).
pub struct AnalyticCurvature {
    length: f64,
    jet: Box<JetFn>,
}

impl AnalyticCurvature {
    pub fn new(length: f64, jet: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        AnalyticCurvature {
            length,
            jet: Box::new(jet),
        }
    }

    pub fn constant(length: f64, kappa: f64) -> Self {
        Self::new(length, move |_| [kappa, 0.0, 0.0])
    }
}

impl fmt::Debug for AnalyticCurvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticCurvature").field("length", &self.length).finish()
    }
}

impl CurvatureSource for AnalyticCurvature {
    fn length(&self) -> f64 {
        self.length
    }

    fn jet(&self, s: f64) -> [f64; 3] {
        (self.jet)(s)
    }
}

/// Curvature samples on a uniform arc-length grid together with upper
/// bounds for `sup|kappa|`, `sup|kappa'|`, `sup|kappa''|`.
#[derive(Clone)]
pub struct CurvatureProfile {
    source: Arc<dyn CurvatureSource>,
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    pub dkappa: Vec<f64>,
    pub ddkappa: Vec<f64>,
    /// Inflated suprema of `|kappa|`, `|kappa'|`, `|kappa''|`.
    pub sup_abs: [f64; 3],
    /// Maximum of the signed curvature (grid maximum refined by golden section).
    pub kappa_max: f64,
    /// Arc-length position of `kappa_max`.
    pub argmax: f64,
}

impl fmt::Debug for CurvatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureProfile")
            .field("length", &self.length())
            .field("samples", &self.s.len())
            .field("sup_abs", &self.sup_abs)
            .field("kappa_max", &self.kappa_max)
            .finish()
    }
}

impl CurvatureProfile {
    pub fn length(&self) -> f64 {
        self.source.length()
    }

    pub fn source(&self) -> &Arc<dyn CurvatureSource> {
        &self.source
    }

    /// Curvature jet at an arbitrary arc-length position.
    pub fn jet(&self, s: f64) -> [f64; 3] {
        self.source.jet(s)
    }

    /// Grid step of the sample grid.
    pub fn step(&self) -> f64 {
        self.length() / (self.s.len() - 1) as f64
    }

    /// `K = sup|kappa| + sup|kappa'| + sup|kappa''|` (each inflated).
    pub fn seminorm_k(&self) -> f64 {
        self.sup_abs.iter().sum()
    }

    /// Larger of `|kappa'|` at the two arc ends.
    pub fn end_slope(&self) -> f64 {
        let l = self.length();
        self.jet(0.0)[1].abs().max(self.jet(l)[1].abs())
    }

    /// Sample `source` on `n_samples` uniform points and bound the suprema.
    ///
    /// Each supremum is the sample maximum plus `L h / 2`, where `L` bounds
    /// the next derivative; the third derivative is estimated from divided
    /// differences of `kappa''`.
    pub fn build(source: Arc<dyn CurvatureSource>, n_samples: usize) -> Result<Self> {
        if n_samples < 16 {
            return Err(Error::MalformedCurve(format!("need at least 16 curvature samples, got {n_samples}")));
        }
        let length = source.length();
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::MalformedCurve(format!("arc length {length} must be positive")));
        }
        let h = length / (n_samples - 1) as f64;
        let s: Vec<f64> = (0..n_samples).map(|i| (i as f64 * h).min(length)).collect();
        let mut kappa = Vec::with_capacity(n_samples);
        let mut dkappa = Vec::with_capacity(n_samples);
        let mut ddkappa = Vec::with_capacity(n_samples);
        for &si in &s {
            let j = source.jet(si);
            if j.iter().any(|v| !v.is_finite()) {
                return Err(Error::MalformedCurve(format!("non-finite curvature jet at s = {si}")));
            }
            kappa.push(j[0]);
            dkappa.push(j[1]);
            ddkappa.push(j[2]);
        }
        let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let max_slope = |v: &[f64]| v.windows(2).fold(0.0f64, |m, w| m.max((w[1] - w[0]).abs() / h));

        // Divided differences of kappa'' miss at most the variation of
        // kappa''' over one cell, which second differences bound.
        let third = max_slope(&ddkappa) + 0.5 * h * max_slope_of_slopes(&ddkappa, h);
        let sup2 = max_abs(&ddkappa) + 0.5 * h * third;
        let sup1 = max_abs(&dkappa) + 0.5 * h * sup2;
        let sup0 = max_abs(&kappa) + 0.5 * h * sup1;

        let (imax, _) = kappa
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        let lo = s[imax.saturating_sub(1)];
        let hi = s[(imax + 1).min(n_samples - 1)];
        let (arg, refined) = golden_max(|x| source.jet(x)[0], lo, hi, 1e-12 * length);
        let (argmax, kappa_max) = if refined > kappa[imax] { (arg, refined) } else { (s[imax], kappa[imax]) };

        Ok(CurvatureProfile {
            source,
            s,
            kappa,
            dkappa,
            ddkappa,
            sup_abs: [sup0, sup1, sup2],
            kappa_max,
            argmax,
        })
    }
}

fn max_slope_of_slopes(v: &[f64], h: f64) -> f64 {
    v.windows(3)
        .fold(0.0f64, |m, w| m.max((w[2] - 2.0 * w[1] + w[0]).abs() / (h * h)))
}

/// Sample the curvature of `arc` and bound its derivatives.
pub fn curvature_profile(arc: &BoundaryArc, n_samples: usize) -> Result<CurvatureProfile> {
    CurvatureProfile::build(Arc::new(arc.clone()), n_samples)
}

/// The smoothness constant `K` of a profile.
pub fn seminorm_k(profile: &CurvatureProfile) -> f64 {
    profile.seminorm_k()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn unit_circle_profile() {
        let arc = BoundaryArc::circle([0.0, 0.0], 1.0, [0.0, TAU]).unwrap();
        let p = curvature_profile(&arc, 64).unwrap();
        assert!(p.kappa.iter().all(|k| (k - 1.0).abs() < 1e-10));
        assert!(p.dkappa.iter().all(|k| k.abs() < 1e-10));
        assert!((seminorm_k(&p) - 1.0).abs() < 1e-10);
        assert!((p.kappa_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        let src = Arc::new(AnalyticCurvature::constant(1.0, 0.0));
        assert!(CurvatureProfile::build(src, 8).is_err());
    }

    #[test]
    fn non_finite_jet_is_malformed() {
        let src = Arc::new(AnalyticCurvature::new(1.0, |s| [1.0 / (s - 0.5), 0.0, 0.0]));
        // the grid hits s = 0.5 exactly with 17 samples
        assert!(matches!(CurvatureProfile::build(src, 17), Err(Error::MalformedCurve(_))));
    }

    #[test]
    fn inflated_suprema_dominate_dense_maxima() {
        let src = Arc::new(AnalyticCurvature::new(TAU, |s| [s.cos(), -s.sin(), -s.cos()]));
        let p = CurvatureProfile::build(src, 23).unwrap();
        // true suprema are all 1
        for b in p.sup_abs {
            assert!(b >= 1.0 - 1e-15, "{b}");
            assert!(b <= 1.2);
        }
    }
}
