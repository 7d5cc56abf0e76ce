//! Sweep tables (CSV) and log-log plots (SVG).

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::asympt::{Method, SweepRecord};
use crate::error::{Error, Result};

/// Column order of sweep tables.
pub const CSV_COLUMNS: [&str; 8] = ["beta", "lower", "upper", "oracle", "residual", "width", "method", "status"];

/// Write records as CSV. `comment`, when given, becomes a leading `# ` line.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W, comment: Option<&str>) -> Result<()> {
    let mut out = out;
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Read records written by [`write_sweep_csv`]; `#` lines are skipped.
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| Error::Parse(format!("CSV record {}: {e}", i + 1))))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

/// A named polyline for [`loglog_svg`].
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: [f64; 4] = [70.0, 20.0, 30.0, 50.0]; // left, right, top, bottom
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Log-log plot. Both axes span whole decades around the positive data;
/// non-positive values are dropped. Gridlines sit at every decade.
pub fn loglog_svg(title: &str, x_label: &str, series: &[Series<'_>]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter()).filter(|(x, y)| *x > 0.0 && *y > 0.0);
    let decade = |v: f64, up: bool| if up { v.log10().ceil() } else { v.log10().floor() };
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        x0 = x0.min(decade(x, false));
        x1 = x1.max(decade(x, true));
        y0 = y0.min(decade(y, false));
        y1 = y1.max(decade(y, true));
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let [ml, mr, mt, mb] = MARGIN;
    let (pw, ph) = (WIDTH - ml - mr, HEIGHT - mt - mb);
    let px = |x: f64| ml + (x.log10() - x0) / (x1 - x0) * pw;
    let py = |y: f64| mt + (1.0 - (y.log10() - y0) / (y1 - y0)) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    for e in x0 as i32..=x1 as i32 {
        let x = px(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{mt}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{e}</text>"##,
            mt + ph,
            mt + ph + 16.0
        );
    }
    for e in y0 as i32..=y1 as i32 {
        let y = py(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{ml}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"##,
            ml + pw,
            ml - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        ml + pw / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-name="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(s.name),
            coords.join(" ")
        );
        for c in &coords {
            let (x, y) = c.split_once(',').unwrap();
            let _ = writeln!(svg, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/>"#);
        }
        let ly = mt + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            ml + 10.0,
            ml + 30.0,
            ml + 36.0,
            ly + 4.0,
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Plot `|residual|` and bracket width against `beta`. The residual series
/// comes from the Bessel oracle when present, otherwise from the first method
/// in the table; the width series from the first method carrying widths.
pub fn sweep_plot(records: &[SweepRecord]) -> String {
    let ok = || records.iter().filter(|r| r.ok());
    let residual_method = ok()
        .find(|r| r.method == Method::Bessel)
        .or_else(|| ok().next())
        .map(|r| r.method);
    let width_method = ok().find(|r| r.width.is_some()).map(|r| r.method);
    let residual = Series {
        name: "|residual|",
        points: ok()
            .filter(|r| Some(r.method) == residual_method)
            .filter_map(|r| Some((r.beta, r.residual?.abs())))
            .collect(),
    };
    let width = Series {
        name: "bracket width",
        points: ok()
            .filter(|r| Some(r.method) == width_method)
            .filter_map(|r| Some((r.beta, r.width?)))
            .collect(),
    };
    loglog_svg("|E(β) + β² + γ_max β| and bracket width", "β", &[residual, width])
}

/// Append one record to a CSV table, writing the column line first when the
/// file is new or empty.
pub fn append_sweep_csv(path: &Path, record: &SweepRecord) -> Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let fresh = file.metadata()?.len() == 0;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut file);
    if fresh {
        w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    }
    w.serialize(record).map_err(csv_error)?;
    w.flush()?;
    Ok(())
}

/// Pretty JSON with shortest round-trip float formatting.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(beta: f64, status: &str) -> SweepRecord {
        SweepRecord {
            beta,
            lower: Some(-beta * beta - 2.0 * beta),
            upper: Some(-beta * beta),
            oracle: None,
            residual: Some(0.1 * beta + 1.0 / 3.0),
            width: Some(2.0 * beta),
            method: Method::Bracket,
            status: status.into(),
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let recs = vec![rec(20.0, "ok"), rec(31.7, "failed: β = 31.7 below threshold, \"quoted\"")];
        let mut buf = Vec::new();
        write_sweep_csv(&recs, &mut buf, Some("robin sweep")).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# robin sweep\nbeta,lower,upper,oracle,residual,width,method,status\n"));
        assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn svg_has_two_series() {
        let svg = sweep_plot(&[rec(10.0, "ok"), rec(100.0, "ok")]);
        assert_eq!(svg.matches("class=\"series\"").count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
