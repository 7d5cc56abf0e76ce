use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A curve description produced non-finite or degenerate derivatives.
    #[error("malformed curve: {0}")]
    MalformedCurve(String),

    /// Arcs do not chain into closed boundary components.
    #[error("malformed domain: {0}")]
    MalformedDomain(String),

    /// The domain violates a hypothesis of the asymptotic theory (e.g. a convex corner).
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    /// Strip construction failed for geometric reasons.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A model operator was requested outside the parameter range where its
    /// ground state is certified.
    #[error("precondition failed in {op}: {failed}")]
    Precondition { op: &'static str, failed: String },

    /// A bracket was requested below the validity threshold.
    #[error("{}", validity_message(*arc, *interval, reason))]
    Validity {
        arc: Option<usize>,
        interval: Option<usize>,
        reason: String,
    },

    /// A derived constant failed its own verification grid.
    #[error("internal constant check failed: {0}")]
    InternalConstant(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("discretization error: {0}")]
    Discretization(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn validity_message(arc: Option<usize>, interval: Option<usize>, reason: &str) -> String {
    match (arc, interval) {
        (Some(a), Some(j)) => format!("arc {a}, interval {j}: {reason}"),
        (Some(a), None) => format!("arc {a}: {reason}"),
        (None, Some(j)) => format!("interval {j}: {reason}"),
        (None, None) => reason.to_string(),
    }
}

impl Error {
    pub(crate) fn precondition(op: &'static str, failed: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            failed: failed.into(),
        }
    }

    /// Attach an arc index to a validity error that does not carry one yet.
    pub(crate) fn with_arc(self, index: usize) -> Self {
        match self {
            Error::Validity {
                arc: None,
                interval,
                reason,
            } => Error::Validity {
                arc: Some(index),
                interval,
                reason,
            },
            other => other,
        }
    }

    /// Process exit status used by the command-line front end:
    /// 1 for hypothesis/validity failures, 2 for usage and parse errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::MalformedCurve(_) | Error::MalformedDomain(_) => 2,
            _ => 1,
        }
    }
}
