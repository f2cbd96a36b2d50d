//! Plain-text point files and JSON results.
//!
//! One point per line, `x y` separated by whitespace. `#` starts a comment and
//! blank lines are skipped; a point's index is its position among data lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::Point;
use crate::graph::{CliquePartition, GraphError, PointSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn parse_points(text: &str) -> Result<PointSet, IoError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let data = raw.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(IoError::Parse {
                line,
                msg: format!("expected 2 coordinates, found {}", fields.len()),
            });
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IoError::Parse {
                    line,
                    msg: format!("invalid coordinate {s:?}"),
                })
        };
        points.push(Point::new(num(fields[0])?, num(fields[1])?));
    }
    Ok(PointSet::new(points)?)
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_points(ps: &PointSet) -> String {
    let mut out = String::new();
    for p in ps.points() {
        let _ = writeln!(out, "{:.16e} {:.16e}", p.x, p.y);
    }
    out
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_points(path: &Path) -> Result<PointSet, IoError> {
    parse_points(&read(path)?)
}

pub fn write_points(path: &Path, ps: &PointSet) -> Result<(), IoError> {
    write(path, &format_points(ps))
}

/// Accepts a bare list of parts, `{"parts": ...}`, or a run result with `"cliques"`.
pub fn parse_partition(text: &str) -> Result<CliquePartition, IoError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let parts = match &v {
        serde_json::Value::Object(m) => m
            .get("cliques")
            .or_else(|| m.get("parts"))
            .cloned()
            .unwrap_or(serde_json::Value::Null),
        _ => v,
    };
    Ok(CliquePartition::new(serde_json::from_value(parts)?))
}

pub fn read_partition(path: &Path) -> Result<CliquePartition, IoError> {
    parse_partition(&read(path)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let ps = parse_points("# header\n\n1 2\n  3.5 -4 # trailing\n").unwrap();
        assert_eq!(ps.points(), &[Point::new(1.0, 2.0), Point::new(3.5, -4.0)]);
    }

    #[test]
    fn missing_coordinate_names_line() {
        let err = parse_points("0 0\n1.0\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
        assert!(parse_points("0 nan").is_err());
    }

    #[test]
    fn format_round_trips() {
        let ps = PointSet::from_xy(&[(0.1, 1.0 / 3.0), (-2.5e-300, 1e300), (0.0, -0.0)]).unwrap();
        assert_eq!(parse_points(&format_points(&ps)).unwrap(), ps);
    }

    #[test]
    fn partition_shapes() {
        let want = CliquePartition::new(vec![vec![0, 2], vec![1]]);
        assert_eq!(parse_partition("[[0,2],[1]]").unwrap(), want);
        assert_eq!(parse_partition(r#"{"parts":[[0,2],[1]]}"#).unwrap(), want);
        assert_eq!(
            parse_partition(r#"{"cliques":[[0,2],[1]],"n":3}"#).unwrap(),
            want
        );
    }
}
