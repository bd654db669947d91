//! Plain-text surface exchange format.
//!
//! ```text
//! curve            # or `axisym`
//! # comments start with '#'
//! 1.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! Each vertex is written with 17 significant digits so values round-trip
//! exactly. A comment of the form `# t = <time>` tags a flow frame.

use super::{AxiSymSurface, PlaneCurve, Point, Surface};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub fn format_surface(surface: &Surface, time: Option<f64>) -> String {
    let mut out = String::with_capacity(48 * surface.len() + 32);
    out.push_str(match surface {
        Surface::Curve(_) => "curve\n",
        Surface::AxiSym(_) => "axisym\n",
    });
    if let Some(t) = time {
        let _ = writeln!(out, "# t = {t:.16e}");
    }
    for p in surface.points() {
        let _ = writeln!(out, "{:.16e} {:.16e}", p.x, p.y);
    }
    out
}

/// Parses a surface and the optional `# t = ...` frame time.
pub fn parse_frame(text: &str) -> Result<(Surface, Option<f64>)> {
    let mut kind: Option<&str> = None;
    let mut time = None;
    let mut pts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("t =") {
                time = Some(v.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad frame time: {e}"),
                })?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if kind.is_none() {
            match line {
                "curve" | "axisym" => kind = Some(if line == "curve" { "curve" } else { "axisym" }),
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `curve` or `axisym`, found `{other}`"),
                    })
                }
            }
            continue;
        }
        let line = line.split('#').next().unwrap_or("");
        let mut fields = line.split_whitespace();
        let mut coord = || -> Result<f64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected two coordinates".into(),
            })?;
            tok.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad number `{tok}`: {e}"),
            })
        };
        let (x, y) = (coord()?, coord()?);
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "expected exactly two coordinates".into(),
            });
        }
        pts.push(Point::new(x, y));
    }
    let surface = match kind {
        Some("curve") => Surface::Curve(PlaneCurve::new(pts)?),
        Some(_) => Surface::AxiSym(AxiSymSurface::new(pts)?),
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing `curve`/`axisym` header".into(),
            })
        }
    };
    Ok((surface, time))
}

pub fn parse_surface(text: &str) -> Result<Surface> {
    parse_frame(text).map(|(s, _)| s)
}

pub fn save(path: &Path, surface: &Surface, time: Option<f64>) -> Result<()> {
    std::fs::write(path, format_surface(surface, time)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<(Surface, Option<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_frame(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_header_reports_line() {
        let err = parse_surface("# hi\npolygon\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn frame_time_is_read() {
        let mut text = String::from("curve\n# t = 0.25\n");
        for k in 0..8 {
            let a = k as f64 * std::f64::consts::PI / 4.0;
            text.push_str(&format!("{} {}\n", a.cos(), a.sin()));
        }
        let (s, t) = parse_frame(&text).unwrap();
        assert_eq!(t, Some(0.25));
        assert_eq!(s.len(), 8);
    }
}
