//! Boundary geometry: analytic arcs, curvature data, domain validation and
//! strip half-widths.

mod arc;
mod domain;
mod file;
mod profile;

pub use arc::{ArcKind, ArcPoint, BoundaryArc};
pub use domain::{
    analytic_halfwidth_limit, gamma_max, inspect_domain, strip_halfwidth_limit, strips_disjoint, validate_domain,
    Check, DomainBoundary, Junction, JunctionKind, ValidationReport, DEFAULT_PROFILE_SAMPLES,
};
pub use file::{load_domain_file, parse_domain_toml};
pub use profile::{curvature_profile, seminorm_k, AnalyticCurvature, CurvatureProfile, CurvatureSource};
