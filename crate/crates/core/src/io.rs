//! Curve CSV files and flow trajectory export.
//!
//! A curve file starts with the header `# ambient=plane n=N` (or
//! `ambient=sphere`) followed by exactly N lines of comma-separated ambient
//! coordinates: two per line in the plane, three on the sphere.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::curve::{Ambient, DiscreteImmersion, Vec3};
use crate::error::{GeometryError, Result};

pub fn curve_to_csv(c: &DiscreteImmersion) -> String {
    let mut out = format!("# ambient={} n={}\n", c.ambient().name(), c.grid_n());
    for p in c.points() {
        match c.ambient() {
            Ambient::Plane => writeln!(out, "{},{}", p.x, p.y),
            Ambient::Sphere => writeln!(out, "{},{},{}", p.x, p.y, p.z),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

fn parse_header(line: &str) -> Result<(Ambient, usize)> {
    let bad = |message: String| GeometryError::Parse { line: 1, message };
    let body = line.strip_prefix('#').ok_or_else(|| bad("missing `#` header".into()))?;
    let mut ambient = None;
    let mut n = None;
    for token in body.split_whitespace() {
        match token.split_once('=') {
            Some(("ambient", value)) => ambient = Some(value.parse::<Ambient>().map_err(|e| bad(e.to_string()))?),
            Some(("n", value)) => n = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            _ => return Err(bad(format!("unexpected header token `{token}`"))),
        }
    }
    match (ambient, n) {
        (Some(a), Some(n)) => Ok((a, n)),
        _ => Err(bad("header must carry ambient= and n=".into())),
    }
}

pub fn curve_from_csv(text: &str) -> Result<DiscreteImmersion> {
    let mut lines = text.lines();
    let (ambient, n) = parse_header(lines.next().unwrap_or_default())?;
    let dim = ambient.dim();
    let mut points = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let coords = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| GeometryError::Parse { line: line_no, message: e.to_string() })?;
        if coords.len() != dim {
            return Err(GeometryError::Parse {
                line: line_no,
                message: format!("expected {dim} coordinates, found {}", coords.len()),
            });
        }
        points.push(Vec3::new(coords[0], coords[1], if dim == 3 { coords[2] } else { 0.0 }));
    }
    if points.len() != n {
        return Err(GeometryError::Parse {
            line: 1,
            message: format!("header declares {n} nodes, file has {}", points.len()),
        });
    }
    DiscreteImmersion::new(points, ambient)
}

pub fn read_curve(path: impl AsRef<Path>) -> Result<DiscreteImmersion> {
    curve_from_csv(&fs::read_to_string(path)?)
}

pub fn write_curve(path: impl AsRef<Path>, c: &DiscreteImmersion) -> Result<()> {
    fs::write(path, curve_to_csv(c))?;
    Ok(())
}

/// Writes each frame as `frame_NNNN.csv` inside `dir`, returning the paths.
pub fn write_trajectory(dir: impl AsRef<Path>, frames: &[DiscreteImmersion]) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    frames
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let path = dir.join(format!("frame_{i:04}.csv"));
            write_curve(&path, c)?;
            Ok(path)
        })
        .collect()
}
