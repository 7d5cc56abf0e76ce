//! C interface.
//!
//! Every fallible entry point returns a [`RobinStatus`] and writes its result
//! through an out-pointer only on success. The message of the most recent
//! failure on the calling thread is available from
//! [`robin_last_error_message`]. Panics are caught at the boundary and
//! reported as [`RobinStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use robin_core::bracket::{BracketContext, BracketMode, BracketOptions, BracketResult, MSchedule, TraceTermBound};
use robin_core::geometry::{load_domain_file, parse_domain_toml, validate_domain, DomainBoundary};
use robin_core::model1d::GroundStateCertificate;
use robin_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobinStatus {
    Ok = 0,
    NullPointer = 1,
    /// A string argument is not valid UTF-8 or an option is out of range.
    InvalidArgument = 2,
    /// Unreadable input or a malformed domain description.
    Parse = 3,
    /// The domain violates a hypothesis (for example a convex corner).
    AssumptionViolation = 4,
    /// A model operator was called outside its certified range.
    Precondition = 5,
    /// `beta` or the strip half-width is outside the bracket's validity range.
    Validity = 6,
    /// Convergence, range or internal consistency failure.
    Numerical = 7,
    Panic = 8,
}

/// Opaque domain handle; free with [`robin_domain_free`].
pub struct RobinDomain {
    inner: DomainBoundary,
}

/// Bracket configuration. Zero fields select the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RobinBracketOptions {
    /// Strip half-width; `<= 0` for 0.99 of the admissible limit.
    pub a: f64,
    /// Intervals per arc; 0 for the β schedule.
    pub m: u32,
    /// Nonzero for the closed-form (asymptotic) interval bounds.
    pub paper_mode: i32,
    /// Nonzero for `M ~ β^{1/4}`.
    pub critical_m: i32,
    /// Nonzero to bound end-face terms by the curvature seminorm.
    pub uniform_end_bound: i32,
}

/// Enclosure of the principal eigenvalue.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RobinBracket {
    pub beta: f64,
    pub lower: f64,
    pub upper: f64,
    pub a: f64,
    pub gamma_max: f64,
    /// Largest interval count over the arcs.
    pub m: u32,
    /// Nonzero when the domain is unbounded.
    pub exterior: i32,
}

/// Ground state of a one-dimensional model operator.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RobinGroundState {
    pub eigenvalue: f64,
    /// Analytic enclosure `[lo, hi]`.
    pub enclosure_lo: f64,
    pub enclosure_hi: f64,
    /// `ln |E + beta^2|`; finite even when the gap underflows.
    pub ln_gap: f64,
    /// Nonzero when the eigenvalue lies strictly inside the enclosure.
    pub strictly_inside: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(e: &Error) -> RobinStatus {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::MalformedCurve(_) | Error::MalformedDomain(_) => RobinStatus::Parse,
        Error::AssumptionViolation(_) => RobinStatus::AssumptionViolation,
        Error::Precondition { .. } => RobinStatus::Precondition,
        Error::Validity { .. } => RobinStatus::Validity,
        _ => RobinStatus::Numerical,
    }
}

struct Failure(RobinStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(RobinStatus::NullPointer, format!("{name} is null"))
}

/// Run `body`, recording failures and containing panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RobinStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            RobinStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {message}"));
            RobinStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RobinStatus::InvalidArgument, format!("{name} is not valid UTF-8")))
}

unsafe fn domain_arg<'a>(p: *const RobinDomain) -> Result<&'a DomainBoundary, Failure> {
    p.as_ref().map(|d| &d.inner).ok_or_else(|| null("domain"))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn give_domain(inner: DomainBoundary) -> *mut RobinDomain {
    Box::into_raw(Box::new(RobinDomain { inner }))
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn robin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a TOML domain description.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_domain_from_toml(source: *const c_char, out: *mut *mut RobinDomain) -> RobinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let domain = parse_domain_toml(str_arg(source, "source")?)?;
        out.write(give_domain(domain));
        Ok(())
    })
}

/// Load a TOML domain description from a file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_domain_load(path: *const c_char, out: *mut *mut RobinDomain) -> RobinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let domain = load_domain_file(Path::new(str_arg(path, "path")?))?;
        out.write(give_domain(domain));
        Ok(())
    })
}

/// Disk of the given radius centred at the origin.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_domain_disk(radius: f64, out: *mut *mut RobinDomain) -> RobinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(give_domain(DomainBoundary::disk(radius)?));
        Ok(())
    })
}

/// Release a domain. Null is ignored.
///
/// # Safety
/// `domain` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn robin_domain_free(domain: *mut RobinDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// Check the geometric hypotheses. Returns `Ok` when all pass; the failing
/// check is named in the last error message otherwise.
///
/// # Safety
/// `domain` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn robin_domain_validate(domain: *const RobinDomain) -> RobinStatus {
    guard(|| {
        validate_domain(domain_arg(domain)?)?;
        Ok(())
    })
}

/// Maximal signed boundary curvature.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_domain_gamma_max(domain: *const RobinDomain, out: *mut f64) -> RobinStatus {
    guard(|| {
        let g = robin_core::geometry::gamma_max(domain_arg(domain)?)?;
        write_out(out, g, "out")
    })
}

/// Options equivalent to passing null.
#[no_mangle]
pub extern "C" fn robin_bracket_options_default() -> RobinBracketOptions {
    RobinBracketOptions {
        a: 0.0,
        m: 0,
        paper_mode: 0,
        critical_m: 0,
        uniform_end_bound: 0,
    }
}

fn options_from(o: Option<&RobinBracketOptions>) -> Result<BracketOptions, Failure> {
    let Some(o) = o else {
        return Ok(BracketOptions::default());
    };
    if o.a.is_nan() {
        return Err(Failure(RobinStatus::InvalidArgument, "a is NaN".into()));
    }
    Ok(BracketOptions {
        a: (o.a > 0.0).then_some(o.a),
        m: (o.m > 0).then_some(o.m as usize),
        mode: if o.paper_mode != 0 {
            BracketMode::PaperAsymptotic
        } else {
            BracketMode::SharpRoot
        },
        schedule: if o.critical_m != 0 {
            MSchedule::Critical
        } else {
            MSchedule::Standard
        },
        trace_bound: if o.uniform_end_bound != 0 {
            TraceTermBound::Seminorm
        } else {
            TraceTermBound::Endpoint
        },
        ..BracketOptions::default()
    })
}

unsafe fn compute_bracket(
    domain: *const RobinDomain,
    beta: f64,
    options: *const RobinBracketOptions,
) -> Result<BracketResult, Failure> {
    let domain = domain_arg(domain)?;
    let options = options_from(options.as_ref())?;
    Ok(BracketContext::new(domain, options)?.bounds(beta)?)
}

/// Two-sided enclosure of the principal eigenvalue at `beta`.
///
/// # Safety
/// `domain` must be a live handle, `options` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn robin_bracket(
    domain: *const RobinDomain,
    beta: f64,
    options: *const RobinBracketOptions,
    out: *mut RobinBracket,
) -> RobinStatus {
    guard(|| {
        let r = compute_bracket(domain, beta, options)?;
        let summary = RobinBracket {
            beta: r.beta,
            lower: r.lower,
            upper: r.upper,
            a: r.a,
            gamma_max: r.gamma_max,
            m: r.arcs.iter().map(|b| b.m).max().unwrap_or(0) as u32,
            exterior: r.exterior as i32,
        };
        write_out(out, summary, "out")
    })
}

/// Full enclosure with per-interval certificates as a JSON document.
/// Release the string with [`robin_string_free`].
///
/// # Safety
/// As for [`robin_bracket`]; `out` receives an owned string.
#[no_mangle]
pub unsafe extern "C" fn robin_bracket_json(
    domain: *const RobinDomain,
    beta: f64,
    options: *const RobinBracketOptions,
    out: *mut *mut c_char,
) -> RobinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = compute_bracket(domain, beta, options)?;
        let json = robin_core::report::to_json(&r)?;
        let c = CString::new(json).map_err(|_| Failure(RobinStatus::Numerical, "JSON contains NUL".into()))?;
        out.write(c.into_raw());
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn robin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact principal eigenvalue of the disk of radius `radius`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_disk_exact(radius: f64, beta: f64, out: *mut f64) -> RobinStatus {
    guard(|| write_out(out, robin_core::direct::disk_exact(radius, beta)?, "out"))
}

fn ground_state(c: &GroundStateCertificate) -> RobinGroundState {
    RobinGroundState {
        eigenvalue: c.eigenvalue,
        enclosure_lo: c.enclosure[0],
        enclosure_hi: c.enclosure[1],
        ln_gap: c.ln_gap,
        strictly_inside: c.strictly_inside() as i32,
    }
}

/// Ground state on `(0, a)` with Robin conditions of strength `beta` at 0
/// and slope `gamma` at `a`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_robin_ground(a: f64, beta: f64, gamma: f64, out: *mut RobinGroundState) -> RobinStatus {
    guard(|| {
        let c = robin_core::model1d::robin_robin_ground(a, beta, gamma)?;
        write_out(out, ground_state(&c), "out")
    })
}

/// Ground state on `(0, a)` with a Robin condition at 0 and Dirichlet at `a`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn robin_dirichlet_ground(a: f64, beta: f64, out: *mut RobinGroundState) -> RobinStatus {
    guard(|| {
        let c = robin_core::model1d::robin_dirichlet_ground(a, beta)?;
        write_out(out, ground_state(&c), "out")
    })
}
