//! ASCII XYZ point clouds: one `x y z` or `x y z nx ny nz` record per line.
//! `#` comments and blank lines are skipped; a file must be consistent about
//! carrying normals.

use std::path::Path;

use super::IoError;
use crate::geometry::{PointCloud, Vec3};

fn bad(line: usize, msg: impl Into<String>) -> IoError {
    IoError::XyzParse { line, msg: msg.into() }
}

pub fn parse_xyz(text: &str) -> Result<PointCloud, IoError> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| bad(line_no, format!("bad number '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(bad(line_no, "non-finite value"));
        }
        match vals.len() {
            3 => points.push(Vec3::new(vals[0], vals[1], vals[2])),
            6 => {
                points.push(Vec3::new(vals[0], vals[1], vals[2]));
                let n = Vec3::new(vals[3], vals[4], vals[5])
                    .normalized()
                    .ok_or_else(|| bad(line_no, "zero-length normal"))?;
                normals.push(n);
            }
            n => return Err(bad(line_no, format!("expected 3 or 6 values, got {n}"))),
        }
        if !normals.is_empty() && normals.len() != points.len() {
            return Err(bad(line_no, "mixed records with and without normals"));
        }
    }
    if normals.is_empty() {
        Ok(PointCloud::new(points))
    } else {
        Ok(PointCloud::with_normals(points, normals)?)
    }
}

pub fn write_xyz(cloud: &PointCloud) -> String {
    let mut out = String::new();
    match &cloud.normals {
        Some(ns) => {
            for (p, n) in cloud.points.iter().zip(ns) {
                out.push_str(&format!("{} {} {} {} {} {}\n", p.x, p.y, p.z, n.x, n.y, n.z));
            }
        }
        None => {
            for p in &cloud.points {
                out.push_str(&format!("{} {} {}\n", p.x, p.y, p.z));
            }
        }
    }
    out
}

pub fn load_xyz(path: &Path) -> Result<PointCloud, IoError> {
    parse_xyz(&std::fs::read_to_string(path)?)
}

pub fn save_xyz(cloud: &PointCloud, path: &Path) -> Result<(), IoError> {
    Ok(std::fs::write(path, write_xyz(cloud))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_points() {
        let cloud = parse_xyz("# header\n0 0 0\n1.5 -2 3e-2\n\n").unwrap();
        assert_eq!(cloud.len(), 2);
        assert!(cloud.normals.is_none());
        assert_eq!(cloud.points[1], Vec3::new(1.5, -2.0, 0.03));
    }

    #[test]
    fn parses_points_with_normals() {
        let cloud = parse_xyz("0 0 0 0 0 2\n1 1 1 1 0 0\n").unwrap();
        let normals = cloud.normals.as_ref().unwrap();
        assert_eq!(normals[0], Vec3::new(0.0, 0.0, 1.0)); // renormalized
    }

    #[test]
    fn mixed_records_rejected() {
        assert!(parse_xyz("0 0 0\n1 1 1 0 0 1\n").is_err());
        assert!(parse_xyz("0 0 0 0 0 1\n1 1 1\n").is_err());
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(parse_xyz("0 0\n").is_err());
        assert!(parse_xyz("a b c\n").is_err());
        assert!(parse_xyz("1 2 inf\n").is_err());
    }

    #[test]
    fn round_trips_exactly() {
        let cloud = PointCloud::with_normals(
            vec![Vec3::new(0.125, -3.5, 7.25), Vec3::new(1e-9, 2.0, -0.0625)],
            vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0)],
        )
        .unwrap();
        let back = parse_xyz(&write_xyz(&cloud)).unwrap();
        assert_eq!(back, cloud);
    }
}
