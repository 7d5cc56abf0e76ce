//! Finite-difference ground state of the strip form in tubular coordinates.
//!
//! The form on `(0, l) x (0, a)` is
//!
//! ```text
//! q(f) = ∬ |f_s|^2 / (1 - uκ)^2 + |f_u|^2 - V |f|^2
//!        - ∫ (β + κ/2) |f(s,0)|^2 + ½ ∫ κ/(1 - aκ) |f(s,a)|^2
//!        + ½ κ'(l) ∫ u/(1 - uκ(l))^3 |f(l,u)|^2 - ½ κ'(0) ∫ u/(1 - uκ(0))^3 |f(0,u)|^2
//! ```
//!
//! with the last three terms present only for the Neumann variant. The
//! Dirichlet variant pins `f = 0` at `s = 0`, `s = l` and `u = a`.
//!
//! Gradients live on grid edges and all integrals use trapezoidal weights,
//! so the discrete form is symmetric and its mass matrix diagonal.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::bracket::strip_potential;
use crate::direct::banded::{BandCholesky, SymBand};
use crate::error::{Error, Result};
use crate::geometry::CurvatureProfile;

const MAX_ITERATIONS: usize = 3000;
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// Natural conditions on the three artificial sides.
    #[serde(rename = "N")]
    Neumann,
    /// Zero on the three artificial sides.
    #[serde(rename = "D")]
    Dirichlet,
}

/// Number of cells along the arc and across the strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripGrid {
    pub n_s: usize,
    pub n_u: usize,
}

impl StripGrid {
    pub fn square(n: usize) -> Self {
        StripGrid { n_s: n, n_u: n }
    }

    fn coarsened(self) -> Option<Self> {
        (self.n_s % 2 == 0 && self.n_u % 2 == 0 && self.n_s >= 4 && self.n_u >= 4).then_some(StripGrid {
            n_s: self.n_s / 2,
            n_u: self.n_u / 2,
        })
    }
}

/// Symmetric quadratic form stored entry by entry (both triangles).
#[derive(Debug, Clone, Default)]
pub struct QuadraticForm {
    dim: usize,
    entries: HashMap<(usize, usize), f64>,
}

impl QuadraticForm {
    pub fn new(dim: usize) -> Self {
        QuadraticForm {
            dim,
            entries: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0.0)
    }

    fn add_diag(&mut self, i: usize, v: f64) {
        *self.entries.entry((i, i)).or_insert(0.0) += v;
    }

    /// Add `w |f_p - f_q|^2`, where an absent index is a pinned zero.
    fn add_edge(&mut self, p: Option<usize>, q: Option<usize>, w: f64) {
        if let Some(p) = p {
            self.add_diag(p, w);
        }
        if let Some(q) = q {
            self.add_diag(q, w);
        }
        if let (Some(p), Some(q)) = (p, q) {
            *self.entries.entry((p, q)).or_insert(0.0) -= w;
            *self.entries.entry((q, p)).or_insert(0.0) -= w;
        }
    }

    /// `max |A_ij - A_ji| / max |A_ij|`.
    pub fn max_asymmetry(&self) -> f64 {
        let scale = self.entries.values().fold(0.0f64, |m, v| m.max(v.abs()));
        let worst = self
            .entries
            .iter()
            .map(|(&(i, j), v)| (v - self.entry(j, i)).abs())
            .fold(0.0f64, f64::max);
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|(&(i, j), v)| v * x[i] * x[j]).sum()
    }

    /// `D^{-1/2} A D^{-1/2}` in banded storage.
    fn scaled_band(&self, bw: usize, mass: &[f64]) -> SymBand {
        let mut band = SymBand::zeros(self.dim, bw);
        for (&(i, j), v) in &self.entries {
            if i >= j {
                band.add(i, j, v / (mass[i] * mass[j]).sqrt());
            }
        }
        band
    }
}

/// Discretized strip problem on a tensor grid.
#[derive(Debug, Clone)]
pub struct StripDiscretization {
    profile: CurvatureProfile,
    a: f64,
    beta: f64,
    bc: BoundaryCondition,
    grid: StripGrid,
}

impl StripDiscretization {
    pub fn new(profile: &CurvatureProfile, a: f64, beta: f64, bc: BoundaryCondition, grid: StripGrid) -> Result<Self> {
        if grid.n_s < 2 || grid.n_u < 2 {
            return Err(Error::Discretization(format!(
                "grid {}x{} too coarse (need at least 2x2 cells)",
                grid.n_s, grid.n_u
            )));
        }
        if !(a > 0.0 && a.is_finite() && beta.is_finite()) {
            return Err(Error::precondition("strip_fd_ground", format!("a = {a}, β = {beta}")));
        }
        let d = StripDiscretization {
            profile: profile.clone(),
            a,
            beta,
            bc,
            grid,
        };
        let hs = d.h_s();
        for i in 0..=2 * grid.n_s {
            let kappa = profile.jet(0.5 * hs * i as f64)[0];
            if 1.0 - a * kappa < 0.5 {
                return Err(Error::Discretization(format!(
                    "1 - uκ = {} < 1/2 at s = {}",
                    1.0 - a * kappa,
                    0.5 * hs * i as f64
                )));
            }
        }
        Ok(d)
    }

    pub fn h_s(&self) -> f64 {
        self.profile.length() / self.grid.n_s as f64
    }

    pub fn h_u(&self) -> f64 {
        self.a / self.grid.n_u as f64
    }

    fn u_count(&self) -> usize {
        match self.bc {
            BoundaryCondition::Neumann => self.grid.n_u + 1,
            BoundaryCondition::Dirichlet => self.grid.n_u,
        }
    }

    fn s_range(&self) -> (usize, usize) {
        match self.bc {
            BoundaryCondition::Neumann => (0, self.grid.n_s),
            BoundaryCondition::Dirichlet => (1, self.grid.n_s - 1),
        }
    }

    /// Unknown index of node `(i, j)`, or `None` for a pinned node.
    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i0, i1) = self.s_range();
        (i >= i0 && i <= i1 && j < self.u_count()).then(|| (i - i0) * self.u_count() + j)
    }

    pub fn dim(&self) -> usize {
        let (i0, i1) = self.s_range();
        (i1 + 1 - i0) * self.u_count()
    }

    fn weights(n: usize, h: f64) -> Vec<f64> {
        (0..=n).map(|i| if i == 0 || i == n { 0.5 * h } else { h }).collect()
    }

    /// Diagonal of the lumped mass matrix, indexed like the unknowns.
    pub fn mass(&self) -> Vec<f64> {
        let ws = Self::weights(self.grid.n_s, self.h_s());
        let wu = Self::weights(self.grid.n_u, self.h_u());
        let mut m = vec![0.0; self.dim()];
        for i in 0..=self.grid.n_s {
            for j in 0..=self.grid.n_u {
                if let Some(p) = self.index(i, j) {
                    m[p] = ws[i] * wu[j];
                }
            }
        }
        m
    }

    /// Stiffness side of the discrete form.
    pub fn quadratic_form(&self) -> QuadraticForm {
        let StripGrid { n_s, n_u } = self.grid;
        let (hs, hu) = (self.h_s(), self.h_u());
        let ws = Self::weights(n_s, hs);
        let wu = Self::weights(n_u, hu);
        let u = |j: usize| j as f64 * hu;
        let node_jet: Vec<[f64; 3]> = (0..=n_s).map(|i| self.profile.jet(i as f64 * hs)).collect();
        let mut q = QuadraticForm::new(self.dim());

        for i in 0..n_s {
            let kappa_mid = self.profile.jet((i as f64 + 0.5) * hs)[0];
            for j in 0..=n_u {
                let w = wu[j] / hs / (1.0 - u(j) * kappa_mid).powi(2);
                q.add_edge(self.index(i, j), self.index(i + 1, j), w);
            }
        }
        for i in 0..=n_s {
            for j in 0..n_u {
                q.add_edge(self.index(i, j), self.index(i, j + 1), ws[i] / hu);
            }
        }
        for i in 0..=n_s {
            let jet = node_jet[i];
            for j in 0..=n_u {
                if let Some(p) = self.index(i, j) {
                    q.add_diag(p, -ws[i] * wu[j] * strip_potential(jet, u(j)));
                }
            }
            if let Some(p) = self.index(i, 0) {
                q.add_diag(p, -ws[i] * (self.beta + 0.5 * jet[0]));
            }
            if let Some(p) = self.index(i, n_u) {
                q.add_diag(p, ws[i] * 0.5 * jet[0] / (1.0 - self.a * jet[0]));
            }
        }
        if self.bc == BoundaryCondition::Neumann {
            for (i, sign) in [(n_s, 1.0), (0, -1.0)] {
                let [kappa, dk, _] = node_jet[i];
                for j in 0..=n_u {
                    let p = self.index(i, j).expect("Neumann end nodes are unknowns");
                    q.add_diag(p, sign * 0.5 * dk * wu[j] * u(j) / (1.0 - u(j) * kappa).powi(3));
                }
            }
        }
        q
    }

    fn initial_vector(&self, mass: &[f64]) -> Vec<f64> {
        let len = self.profile.length();
        let mut x = vec![0.0; self.dim()];
        for i in 0..=self.grid.n_s {
            let s = i as f64 * self.h_s();
            let tangential = match self.bc {
                BoundaryCondition::Neumann => 1.0,
                BoundaryCondition::Dirichlet => (std::f64::consts::PI * s / len).sin(),
            };
            for j in 0..=self.grid.n_u {
                if let Some(p) = self.index(i, j) {
                    x[p] = tangential * (-self.beta.max(1.0) * j as f64 * self.h_u()).exp() * mass[p].sqrt();
                }
            }
        }
        normalize(&mut x);
        x
    }

    /// Smallest eigenvalue by shifted inverse iteration on the scaled matrix.
    pub fn solve(&self) -> Result<NumericEigenResult> {
        let mass = self.mass();
        if mass.iter().any(|m| !(*m > 0.0)) {
            return Err(Error::Discretization("mass matrix is not positive definite".into()));
        }
        let q = self.quadratic_form();
        let b = q.scaled_band(self.u_count(), &mass);

        let k = self.profile.seminorm_k();
        let mut sigma = -(self.beta.abs() + k).powi(2) - 1.0;
        let mut chol = factor_below(&b, &mut sigma)?;
        let mut x = self.initial_vector(&mass);
        let (mut rho, mut residual) = (0.0, f64::INFINITY);
        let mut last_shift_residual = f64::INFINITY;
        for it in 1..=MAX_ITERATIONS {
            x = chol.solve(&x);
            normalize(&mut x);
            let bx = b.mul_vec(&x);
            rho = dot(&x, &bx);
            residual = bx.iter().zip(&x).map(|(p, q)| (p - rho * q).powi(2)).sum::<f64>().sqrt();
            if residual <= RESIDUAL_TOL * rho.abs() {
                return Ok(NumericEigenResult {
                    eigenvalue: rho,
                    grid: self.grid,
                    bc: self.bc,
                    iterations: it,
                    residual,
                    shift: sigma,
                    richardson: None,
                });
            }
            // Move the shift towards rho only where the factorization proves
            // it still lies below the smallest eigenvalue.
            if residual < 0.5 * last_shift_residual {
                last_shift_residual = residual;
                let mut gap = 4.0 * residual.max(1e-12 * rho.abs());
                for _ in 0..4 {
                    let candidate = rho - gap;
                    if candidate <= sigma {
                        break;
                    }
                    let mut shifted = b.clone();
                    shifted.shift_diagonal(candidate);
                    if let Ok(c) = shifted.cholesky() {
                        chol = c;
                        sigma = candidate;
                        break;
                    }
                    gap *= 4.0;
                }
            }
        }
        let _ = rho;
        Err(Error::Convergence {
            iterations: MAX_ITERATIONS,
            residual,
        })
    }
}

/// Factor `B - sigma I`, lowering `sigma` until the factorization succeeds.
fn factor_below(b: &SymBand, sigma: &mut f64) -> Result<BandCholesky> {
    for _ in 0..60 {
        let mut shifted = b.clone();
        shifted.shift_diagonal(*sigma);
        if let Ok(c) = shifted.cholesky() {
            return Ok(c);
        }
        *sigma -= sigma.abs().max(1.0);
    }
    Err(Error::Discretization("no shift below the spectrum found".into()))
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

fn normalize(x: &mut [f64]) {
    let n = dot(x, x).sqrt();
    for v in x.iter_mut() {
        *v /= n;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RichardsonPair {
    /// Eigenvalue on the grid with doubled steps.
    pub coarse: f64,
    /// Eigenvalue on the requested grid.
    pub fine: f64,
    /// `(4 fine - coarse) / 3`.
    pub extrapolated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericEigenResult {
    pub eigenvalue: f64,
    pub grid: StripGrid,
    pub bc: BoundaryCondition,
    pub iterations: usize,
    pub residual: f64,
    pub shift: f64,
    pub richardson: Option<RichardsonPair>,
}

/// Discrete strip ground state on `grid`, with the Richardson pair against
/// the grid of doubled steps when both cell counts are even.
pub fn strip_fd_ground(
    profile: &CurvatureProfile,
    a: f64,
    beta: f64,
    bc: BoundaryCondition,
    grid: StripGrid,
) -> Result<NumericEigenResult> {
    let mut fine = StripDiscretization::new(profile, a, beta, bc, grid)?.solve()?;
    if let Some(coarse_grid) = grid.coarsened() {
        let coarse = StripDiscretization::new(profile, a, beta, bc, coarse_grid)?.solve()?;
        fine.richardson = Some(RichardsonPair {
            coarse: coarse.eigenvalue,
            fine: fine.eigenvalue,
            extrapolated: (4.0 * fine.eigenvalue - coarse.eigenvalue) / 3.0,
        });
    }
    Ok(fine)
}
