//! Certified two-sided enclosures of the principal eigenvalue of the Robin
//! Laplacian `-Δ` with `∂_ν f + β f = 0` on planar domains whose boundary is
//! smooth or has only reflex corners, together with the oracles and sweep
//! tooling used to check `E(β) = -β² - γ_max β + O(β^{2/3})`.

pub mod asympt;
pub mod bracket;
pub mod cli;
pub mod direct;
pub mod error;
pub mod geometry;
pub mod model1d;
mod quad;
pub mod report;

pub use error::{Error, Result};
