//! Text formats.
//!
//! Points: one point per line, two base-10 integers separated by whitespace.
//! Lines: three integers `a b c` in canonical form. In both formats empty
//! lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::geom::{check_coord, CanonicalLine, IncidenceCount, Point, PointSet};

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split_ascii_whitespace().collect()))
        }
    })
}

fn parse_int(line: usize, token: &str) -> Result<i128> {
    token.parse::<i128>().map_err(|_| Error::Parse {
        line,
        message: format!("`{token}` is not an integer"),
    })
}

fn fields<const N: usize>(line: usize, tokens: &[&str], what: &str) -> Result<[i128; N]> {
    if tokens.len() != N {
        return Err(Error::Parse {
            line,
            message: format!("expected {N} integers for a {what}, found {} fields", tokens.len()),
        });
    }
    let mut out = [0i128; N];
    for (slot, token) in out.iter_mut().zip(tokens) {
        *slot = parse_int(line, token)?;
    }
    Ok(out)
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut points = Vec::new();
    let mut first_seen: FxHashMap<Point, usize> = FxHashMap::default();
    for (line, tokens) in records(text) {
        let [x, y] = fields::<2>(line, &tokens, "point")?;
        for v in [x, y] {
            check_coord(v).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        let p = Point::new(x as i64, y as i64)?;
        if let Some(prev) = first_seen.insert(p, line) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate point {p} (first on line {prev})"),
            });
        }
        points.push(p);
    }
    Ok(PointSet::new(points).expect("duplicates were rejected above"))
}

pub fn write_points(s: &PointSet) -> String {
    let mut out = String::with_capacity(s.len() * 16);
    for p in s {
        let _ = writeln!(out, "{} {}", p.x(), p.y());
    }
    out
}

pub fn parse_lines(text: &str) -> Result<Vec<CanonicalLine>> {
    let mut lines = Vec::new();
    for (line, tokens) in records(text) {
        let [a, b, c] = fields::<3>(line, &tokens, "line")?;
        let parsed = i64::try_from(a)
            .ok()
            .zip(i64::try_from(b).ok())
            .ok_or_else(|| Error::Parse {
                line,
                message: "line coefficients a and b must fit in 64 bits".into(),
            })
            .and_then(|(a, b)| {
                CanonicalLine::new(a, b, c).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })
            })?;
        lines.push(parsed);
    }
    Ok(lines)
}

pub fn write_lines(lines: &[CanonicalLine]) -> String {
    let mut out = String::new();
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    out
}

/// `a b c count` per line.
pub fn write_counts(counts: &[IncidenceCount]) -> String {
    let mut out = String::new();
    for ic in counts {
        let _ = writeln!(out, "{} {}", ic.line, ic.count);
    }
    out
}
