//! Command-line front end of the `robin` binary.
//!
//! Exit codes: 0 success, 1 hypothesis or validity failure, 2 usage or parse
//! error. Sweep output is CSV unless the output path ends in `.json`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asympt::{fit_expansion, geometric_range, sweep_with, FitResult, Method, SweepRecord};
use crate::bracket::{BracketContext, BracketMode, BracketOptions, MSchedule, TraceTermBound};
use crate::direct::disk_ground;
use crate::error::{Error, Result};
use crate::geometry::{inspect_domain, load_domain_file, validate_domain, DomainBoundary};
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "robin", version, about = "Certified bounds on the principal Robin eigenvalue of planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the geometric hypotheses of a domain.
    Validate {
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Two-sided enclosure at a single β, as JSON.
    Bracket {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        bracket: BracketArgs,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a one-line CSV record to this table.
        #[arg(long)]
        append_csv: Option<PathBuf>,
    },
    /// Evaluate methods over many β, optionally fitting and plotting.
    Sweep {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        betas: BetaArgs,
        #[command(flatten)]
        bracket: BracketArgs,
        /// Comma-separated subset of bracket, paper, bessel.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        /// Table path (`.json` for JSON records); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit the timestamped comment line.
        #[arg(long)]
        no_header: bool,
        /// Write the fit JSON here.
        #[arg(long)]
        fit_out: Option<PathBuf>,
        /// Write a log-log SVG of |residual| and bracket width here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Fit `E ≈ -c2 β² - c1 β` to a stored sweep.
    Fit {
        #[command(flatten)]
        domain: DomainArgs,
        /// Sweep table (CSV or `.json`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Exact principal eigenvalue of a disk.
    DiskExact {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Disk,
    Ellipse,
    Fourier,
    TwoDisks,
    Lens,
    Annulus,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// TOML domain description.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub domain: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Disk radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Ellipse semi-axes `a,b`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [2.0, 1.0])]
    pub semi_axes: Vec<f64>,
    /// Amplitude of the three-lobed Fourier curve `r = 1 + eps cos 3t`.
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    /// Centre offset of the two-disk union and the lens.
    #[arg(long, default_value_t = 0.5)]
    pub offset: f64,
    /// Annulus radii `inner,outer`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.5, 1.0])]
    pub radii: Vec<f64>,
}

impl DomainArgs {
    pub fn load(&self) -> Result<DomainBoundary> {
        if let Some(path) = &self.domain {
            return load_domain_file(path);
        }
        let domain = match self.builtin.expect("clap enforces a domain source") {
            Builtin::Disk => DomainBoundary::disk(self.radius),
            Builtin::Ellipse => DomainBoundary::ellipse(self.semi_axes[0], self.semi_axes[1]),
            Builtin::Fourier => DomainBoundary::trefoil(self.eps),
            Builtin::TwoDisks => DomainBoundary::two_disks(self.offset),
            Builtin::Lens => DomainBoundary::lens(self.offset),
            Builtin::Annulus => DomainBoundary::annulus(self.radii[0], self.radii[1]),
        };
        // bad builtin parameters are usage errors
        domain.map_err(|e| Error::Parse(format!("builtin parameters: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sharp,
    #[value(alias = "paper-asymptotic")]
    Paper,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    /// Strip half-width (default 0.99 of the admissible limit).
    #[arg(long)]
    pub a: Option<f64>,
    /// Intervals per arc (default from the β schedule).
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value = "sharp")]
    pub mode: ModeArg,
    /// Use M ~ β^{1/4} instead of β^{1/3}.
    #[arg(long = "critical-M")]
    pub critical_m: bool,
    /// Bound end-face trace terms by the uniform curvature seminorm instead
    /// of the end slopes.
    #[arg(long)]
    pub uniform_end_bound: bool,
}

impl BracketArgs {
    pub fn options(&self) -> BracketOptions {
        BracketOptions {
            a: self.a,
            m: self.m,
            mode: match self.mode {
                ModeArg::Sharp => BracketMode::SharpRoot,
                ModeArg::Paper => BracketMode::PaperAsymptotic,
            },
            schedule: if self.critical_m { MSchedule::Critical } else { MSchedule::Standard },
            trace_bound: if self.uniform_end_bound {
                TraceTermBound::Seminorm
            } else {
                TraceTermBound::Endpoint
            },
            ..BracketOptions::default()
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BetaArgs {
    /// Comma-separated increasing β values.
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    /// Geometric range `start:end:count`.
    #[arg(long, value_parser = BetaRange::from_str)]
    pub beta_range: Option<BetaRange>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl FromStr for BetaRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, count] = parts[..] else {
            return Err(format!("expected start:end:count, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        Ok(BetaRange {
            start: num(start)?,
            end: num(end)?,
            count: count.trim().parse().map_err(|e| format!("`{count}`: {e}"))?,
        })
    }
}

impl BetaArgs {
    pub fn values(&self) -> Result<Vec<f64>> {
        match (&self.beta, &self.beta_range) {
            (Some(list), _) => {
                if list.windows(2).any(|w| !(w[0] < w[1])) || list.iter().any(|b| !(*b > 0.0)) {
                    return Err(Error::Parse("β list must be positive and strictly increasing".into()));
                }
                Ok(list.clone())
            }
            (None, Some(r)) => geometric_range(r.start, r.end, r.count),
            (None, None) => Err(Error::Parse("no β given".into())),
        }
    }
}

/// Fit of one method's records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodFit {
    pub method: Method,
    /// Remainder exponent: slope of `ln|residual|` against `ln β`.
    pub p_hat: Option<f64>,
    pub fit: FitResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub gamma_max: f64,
    pub fits: Vec<MethodFit>,
    /// Methods without a usable fit and the reason.
    pub skipped: Vec<(Method, String)>,
}

/// Fit each method present in `records` separately.
pub fn fit_report(records: &[SweepRecord], gamma_max: f64) -> FitReport {
    let mut methods: Vec<Method> = Vec::new();
    for r in records {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    for m in methods {
        let own: Vec<SweepRecord> = records.iter().filter(|r| r.method == m).cloned().collect();
        match fit_expansion(&own, gamma_max) {
            Ok(fit) => fits.push(MethodFit {
                method: m,
                p_hat: fit.remainder_slope.map(|s| s.slope),
                fit,
            }),
            Err(e) => skipped.push((m, e.to_string())),
        }
    }
    FitReport {
        gamma_max,
        fits,
        skipped,
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    if is_json(path) {
        report::from_json(&fs::read_to_string(path)?)
    } else {
        report::read_sweep_csv(fs::File::open(path)?)
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Validate { domain } => {
            let domain = domain.load()?;
            let report = inspect_domain(&domain);
            write!(out, "{report}")?;
            validate_domain(&domain)?;
        }
        Command::Bracket {
            domain,
            beta,
            bracket,
            out: path,
            append_csv,
        } => {
            let domain = domain.load()?;
            let context = BracketContext::new(&domain, bracket.options())?;
            let result = context.bounds(beta)?;
            emit(&with_newline(report::to_json(&result)?), path.as_deref(), out)?;
            if let Some(table) = append_csv {
                let method = match result.mode {
                    BracketMode::SharpRoot => Method::Bracket,
                    BracketMode::PaperAsymptotic => Method::Paper,
                };
                let record = SweepRecord {
                    beta,
                    lower: Some(result.lower),
                    upper: Some(result.upper),
                    oracle: None,
                    residual: Some(result.midpoint() + beta * beta + result.gamma_max * beta),
                    width: Some(result.width()),
                    method,
                    status: "ok".into(),
                };
                report::append_sweep_csv(&table, &record)?;
            }
        }
        Command::Sweep {
            domain,
            betas,
            bracket,
            methods,
            out: path,
            no_header,
            fit_out,
            plot,
        } => {
            let betas = betas.values()?;
            let domain = domain.load()?;
            let methods = methods.unwrap_or_else(|| {
                if domain.as_disk().is_some() {
                    vec![Method::Bessel, Method::Bracket]
                } else {
                    vec![Method::Bracket]
                }
            });
            let context = BracketContext::new(&domain, bracket.options())?;
            let records = sweep_with(&context, &domain, &betas, &methods)?;
            for r in records.iter().filter(|r| !r.ok()) {
                writeln!(err, "β = {} ({}): {}", r.beta, r.method, r.status)?;
            }
            match path.as_deref() {
                Some(p) if is_json(p) => fs::write(p, with_newline(report::to_json(&records)?))?,
                _ => {
                    let comment = (!no_header).then(|| {
                        let t = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
                        format!("robin sweep, unix time {t}")
                    });
                    let mut buf = Vec::new();
                    report::write_sweep_csv(&records, &mut buf, comment.as_deref())?;
                    match path.as_deref() {
                        Some(p) => fs::write(p, buf)?,
                        None => out.write_all(&buf)?,
                    }
                }
            }
            if let Some(p) = fit_out {
                let fit = fit_report(&records, context.gamma_max());
                fs::write(p, with_newline(report::to_json(&fit)?))?;
            }
            if let Some(p) = plot {
                fs::write(p, report::sweep_plot(&records))?;
            }
        }
        Command::Fit {
            domain,
            input,
            out: path,
            plot,
        } => {
            let records = read_records(&input)?;
            let gamma_max = crate::geometry::gamma_max(&domain.load()?)?;
            let fit = fit_report(&records, gamma_max);
            if fit.fits.is_empty() {
                let reasons: Vec<String> = fit.skipped.iter().map(|(m, e)| format!("{m}: {e}")).collect();
                return Err(Error::Fit(reasons.join("; ")));
            }
            emit(&with_newline(report::to_json(&fit)?), path.as_deref(), out)?;
            if let Some(p) = plot {
                fs::write(p, report::sweep_plot(&records))?;
            }
        }
        Command::DiskExact { radius, beta } => {
            let grounds = beta.iter().map(|&b| disk_ground(radius, b)).collect::<Result<Vec<_>>>()?;
            emit(&with_newline(report::to_json(&grounds)?), None, out)?;
        }
    }
    Ok(())
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
