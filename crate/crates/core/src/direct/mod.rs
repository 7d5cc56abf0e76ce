//! Independent oracles: the exact disk eigenvalue and a finite-difference
//! solver for the strip form.

mod banded;
mod bessel;
mod disk;
mod strip_fd;

pub use banded::{BandCholesky, SymBand};
pub use bessel::{bessel_i, bessel_i_scaled, bessel_ratio, SERIES_LIMIT, UNSCALED_LIMIT};
pub use disk::{disk_exact, disk_ground, DiskGround};
pub use strip_fd::{
    strip_fd_ground, BoundaryCondition, NumericEigenResult, QuadraticForm, RichardsonPair, StripDiscretization,
    StripGrid,
};
