//! TOML domain descriptions.
//!
//! ```toml
//! name = "two disks"          # optional
//!
//! [[arc]]
//! kind = "circle"             # circle | ellipse | fourier
//! center = [-0.5, 0.0]
//! radius = 1.0
//! span = ["pi/3", "5pi/3"]    # numbers or multiples of pi
//! reversed = false            # optional, traverse clockwise
//! component = 0               # optional, boundary component index
//! ```
//!
//! Ellipses take `semi_axes = [a, b]`; Fourier arcs take `x_cos`, `x_sin`,
//! `y_cos`, `y_sin` (missing arrays are zero). Arcs of one component are
//! chained in file order. Unknown keys are rejected.

use serde::Deserialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::geometry::arc::{ArcKind, BoundaryArc};
use crate::geometry::domain::DomainBoundary;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    #[allow(dead_code)]
    name: Option<String>,
    #[serde(rename = "arc", default)]
    arcs: Vec<Spanned<ArcEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcEntry {
    kind: String,
    center: Option<[f64; 2]>,
    radius: Option<f64>,
    semi_axes: Option<[f64; 2]>,
    x_cos: Option<Vec<f64>>,
    x_sin: Option<Vec<f64>>,
    y_cos: Option<Vec<f64>>,
    y_sin: Option<Vec<f64>>,
    span: Option<[Angle; 2]>,
    #[serde(default)]
    reversed: bool,
    #[serde(default)]
    component: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    fn radians(&self) -> std::result::Result<f64, String> {
        match self {
            Angle::Number(x) => Ok(*x),
            Angle::Text(t) => parse_pi_multiple(t).ok_or_else(|| format!("cannot read angle `{t}`")),
        }
    }
}

/// Accepts `1.5`, `pi`, `-pi`, `2pi`, `2*pi`, `pi/3`, `-5pi/3`, `0.5*pi/2`.
fn parse_pi_multiple(text: &str) -> Option<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Some(x);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (t.as_str(), 1.0),
    };
    let coeff = num.strip_suffix("pi")?.trim_end_matches('*');
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    Some(c * PI / den)
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// Parse a domain description from TOML text.
pub fn parse_domain_toml(source: &str) -> Result<DomainBoundary> {
    let file: DomainFile = toml::from_str(source).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    if file.arcs.is_empty() {
        return Err(Error::Parse("no [[arc]] entries".into()));
    }
    let mut components: BTreeMap<usize, Vec<BoundaryArc>> = BTreeMap::new();
    for (index, spanned) in file.arcs.iter().enumerate() {
        let line = line_of(source, spanned.span().start);
        let entry = spanned.get_ref();
        let at = |msg: String| Error::Parse(format!("arc {index} (line {line}): {msg}"));
        let kind = arc_kind(entry).map_err(at)?;
        let arc = BoundaryArc::new(kind, entry.reversed).map_err(|e| match e {
            Error::MalformedCurve(m) => Error::MalformedCurve(format!("arc {index} (line {line}): {m}")),
            other => other,
        })?;
        components.entry(entry.component).or_default().push(arc);
    }
    DomainBoundary::from_components(components.into_values().collect())
}

fn arc_kind(e: &ArcEntry) -> std::result::Result<ArcKind, String> {
    let require = |name: &str, present: bool| if present { Ok(()) } else { Err(format!("missing key `{name}`")) };
    let forbid = |name: &str, present: bool| {
        if present {
            Err(format!("key `{name}` does not apply to kind `{}`", e.kind))
        } else {
            Ok(())
        }
    };
    require("span", e.span.is_some())?;
    let [t0, t1] = e.span.as_ref().unwrap();
    let span = [t0.radians()?, t1.radians()?];
    let has_fourier = [&e.x_cos, &e.x_sin, &e.y_cos, &e.y_sin].iter().any(|c| c.is_some());
    match e.kind.as_str() {
        "circle" => {
            require("radius", e.radius.is_some())?;
            forbid("semi_axes", e.semi_axes.is_some())?;
            forbid("x_cos/x_sin/y_cos/y_sin", has_fourier)?;
            Ok(ArcKind::Circle {
                center: e.center.unwrap_or([0.0, 0.0]),
                radius: e.radius.unwrap(),
                span,
            })
        }
        "ellipse" => {
            require("semi_axes", e.semi_axes.is_some())?;
            forbid("radius", e.radius.is_some())?;
            forbid("x_cos/x_sin/y_cos/y_sin", has_fourier)?;
            Ok(ArcKind::Ellipse {
                center: e.center.unwrap_or([0.0, 0.0]),
                semi_axes: e.semi_axes.unwrap(),
                span,
            })
        }
        "fourier" => {
            forbid("radius", e.radius.is_some())?;
            forbid("semi_axes", e.semi_axes.is_some())?;
            forbid("center", e.center.is_some())?;
            if !has_fourier {
                return Err("fourier arc needs at least one of x_cos, x_sin, y_cos, y_sin".into());
            }
            let n = [&e.x_cos, &e.x_sin, &e.y_cos, &e.y_sin]
                .iter()
                .filter_map(|c| c.as_ref().map(Vec::len))
                .max()
                .unwrap_or(0);
            let get = |c: &Option<Vec<f64>>| {
                let mut v = c.clone().unwrap_or_default();
                v.resize(n, 0.0);
                v
            };
            Ok(ArcKind::Fourier {
                x_cos: get(&e.x_cos),
                x_sin: get(&e.x_sin),
                y_cos: get(&e.y_cos),
                y_sin: get(&e.y_sin),
                span,
            })
        }
        other => Err(format!("unknown kind `{other}` (expected circle, ellipse or fourier)")),
    }
}

/// Read and parse a domain file.
pub fn load_domain_file(path: &Path) -> Result<DomainBoundary> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_domain_toml(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_multiples() {
        assert_eq!(parse_pi_multiple("pi"), Some(PI));
        assert_eq!(parse_pi_multiple("-pi"), Some(-PI));
        assert_eq!(parse_pi_multiple("2pi"), Some(2.0 * PI));
        assert_eq!(parse_pi_multiple("2 * pi"), Some(2.0 * PI));
        assert_eq!(parse_pi_multiple("5pi/3"), Some(5.0 * PI / 3.0));
        assert_eq!(parse_pi_multiple("-2pi/3"), Some(-2.0 * PI / 3.0));
        assert_eq!(parse_pi_multiple("0.25"), Some(0.25));
        assert_eq!(parse_pi_multiple("tau"), None);
    }

    #[test]
    fn circle_file() {
        let d = parse_domain_toml(
            r#"
            [[arc]]
            kind = "circle"
            radius = 2.0
            span = [0, "2pi"]
            "#,
        )
        .unwrap();
        assert_eq!(d.as_disk(), Some(2.0));
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_domain_toml("[[arc]]\nkind = \"circle\"\nradius = 1.0\nspan = [0, 1]\nwobble = 3\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("wobble"), "{msg}");
        assert!(msg.contains("line 5"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_key_reports_arc_and_line() {
        let err = parse_domain_toml("name = \"x\"\n\n[[arc]]\nkind = \"ellipse\"\nspan = [0, 1]\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("arc 0 (line 3)") && msg.contains("semi_axes"), "{msg}");
    }

    #[test]
    fn components_group_arcs() {
        let d = parse_domain_toml(
            r#"
            [[arc]]
            kind = "circle"
            radius = 1.0
            span = [0, "2pi"]

            [[arc]]
            kind = "circle"
            radius = 0.5
            span = [0, "2pi"]
            reversed = true
            component = 1
            "#,
        )
        .unwrap();
        assert_eq!(d.components().len(), 2);
    }
}
