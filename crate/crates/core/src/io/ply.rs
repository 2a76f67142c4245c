//! Binary little-endian PLY point clouds: a single `vertex` element with
//! `float`/`double` scalar properties. `x y z` are required, `nx ny nz`
//! optional; unknown scalar properties are skipped by size.

use std::path::Path;

use super::IoError;
use crate::geometry::{PointCloud, Vec3};

const MAX_VERTICES: usize = 50_000_000;

fn bad(msg: impl Into<String>) -> IoError {
    IoError::PlyParse(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    F32,
    F64,
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
}

impl Scalar {
    fn parse(name: &str) -> Option<Scalar> {
        Some(match name {
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::F32 | Scalar::I32 | Scalar::U32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn read_f64(self, bytes: &[u8]) -> f64 {
        match self {
            Scalar::F32 => f32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            Scalar::F64 => f64::from_le_bytes(bytes[..8].try_into().unwrap()),
            Scalar::I8 => bytes[0] as i8 as f64,
            Scalar::U8 => bytes[0] as f64,
            Scalar::I16 => i16::from_le_bytes(bytes[..2].try_into().unwrap()) as f64,
            Scalar::U16 => u16::from_le_bytes(bytes[..2].try_into().unwrap()) as f64,
            Scalar::I32 => i32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            Scalar::U32 => u32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
        }
    }
}

pub fn parse_ply(bytes: &[u8]) -> Result<PointCloud, IoError> {
    // header is ASCII lines up to and including "end_header"
    let mut offset = 0usize;
    let mut lines: Vec<String> = Vec::new();
    loop {
        let rest = &bytes[offset.min(bytes.len())..];
        let nl = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| bad("missing end_header"))?;
        let line = std::str::from_utf8(&rest[..nl])
            .map_err(|_| bad("non-UTF8 header line"))?
            .trim_end_matches('\r')
            .to_string();
        offset += nl + 1;
        let done = line.trim() == "end_header";
        lines.push(line);
        if done {
            break;
        }
        if lines.len() > 1000 {
            return Err(bad("header too long"));
        }
    }

    if lines.first().map(|l| l.trim()) != Some("ply") {
        return Err(bad("missing 'ply' magic"));
    }
    let mut vertex_count: Option<usize> = None;
    let mut properties: Vec<(Scalar, String)> = Vec::new();
    let mut format_seen = false;
    let mut in_vertex_element = false;
    for line in &lines[1..] {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["format", fmt, "1.0"] => {
                if *fmt != "binary_little_endian" {
                    return Err(bad(format!("unsupported format '{fmt}'")));
                }
                format_seen = true;
            }
            ["format", ..] => return Err(bad("unsupported format line")),
            ["comment", ..] | ["end_header"] | [] => {}
            ["element", "vertex", count] => {
                if vertex_count.is_some() {
                    return Err(bad("duplicate vertex element"));
                }
                let n: usize = count.parse().map_err(|_| bad("bad vertex count"))?;
                if n > MAX_VERTICES {
                    return Err(bad(format!("vertex count {n} exceeds reader limit")));
                }
                vertex_count = Some(n);
                in_vertex_element = true;
            }
            ["element", ..] => {
                // only a single vertex element is supported; anything else
                // would leave the payload layout ambiguous
                return Err(bad("unsupported element (only 'vertex' is handled)"));
            }
            ["property", "list", ..] => return Err(bad("list properties unsupported")),
            ["property", ty, name] => {
                if !in_vertex_element {
                    return Err(bad("property before vertex element"));
                }
                let scalar =
                    Scalar::parse(ty).ok_or_else(|| bad(format!("unknown property type '{ty}'")))?;
                properties.push((scalar, (*name).to_string()));
            }
            _ => return Err(bad(format!("unrecognized header line '{line}'"))),
        }
    }
    if !format_seen {
        return Err(bad("missing format line"));
    }
    let count = vertex_count.ok_or_else(|| bad("missing vertex element"))?;

    let find = |name: &str| properties.iter().position(|(_, n)| n == name);
    let (ix, iy, iz) = match (find("x"), find("y"), find("z")) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(bad("vertex element must carry x, y, z")),
    };
    let normal_idx = match (find("nx"), find("ny"), find("nz")) {
        (Some(a), Some(b), Some(c)) => Some((a, b, c)),
        (None, None, None) => None,
        _ => return Err(bad("normals must be all of nx, ny, nz or none")),
    };

    let stride: usize = properties.iter().map(|(s, _)| s.size()).sum();
    let payload = &bytes[offset..];
    let expected = stride.checked_mul(count).ok_or_else(|| bad("vertex count overflow"))?;
    if payload.len() != expected {
        return Err(bad(format!(
            "payload size mismatch: expected {expected} bytes, found {}",
            payload.len()
        )));
    }

    let mut field_offsets = Vec::with_capacity(properties.len());
    let mut acc = 0;
    for (s, _) in &properties {
        field_offsets.push(acc);
        acc += s.size();
    }

    let mut points = Vec::with_capacity(count);
    let mut normals = Vec::with_capacity(if normal_idx.is_some() { count } else { 0 });
    for row in payload.chunks_exact(stride.max(1)).take(count) {
        let read = |i: usize| properties[i].0.read_f64(&row[field_offsets[i]..]);
        let p = Vec3::new(read(ix), read(iy), read(iz));
        if !p.is_finite() {
            return Err(bad("non-finite coordinate"));
        }
        points.push(p);
        if let Some((a, b, c)) = normal_idx {
            let n = Vec3::new(read(a), read(b), read(c));
            if !n.is_finite() {
                return Err(bad("non-finite normal"));
            }
            normals.push(n.normalized().ok_or_else(|| bad("zero-length normal"))?);
        }
    }
    if normal_idx.is_some() {
        Ok(PointCloud::with_normals(points, normals)?)
    } else {
        Ok(PointCloud::new(points))
    }
}

pub fn write_ply(cloud: &PointCloud) -> Vec<u8> {
    let mut header = String::from("ply\nformat binary_little_endian 1.0\n");
    header.push_str(&format!("element vertex {}\n", cloud.len()));
    header.push_str("property double x\nproperty double y\nproperty double z\n");
    if cloud.normals.is_some() {
        header.push_str("property double nx\nproperty double ny\nproperty double nz\n");
    }
    header.push_str("end_header\n");
    let mut out = header.into_bytes();
    for (i, p) in cloud.points.iter().enumerate() {
        for v in [p.x, p.y, p.z] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        if let Some(ns) = &cloud.normals {
            let n = ns[i];
            for v in [n.x, n.y, n.z] {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    out
}

pub fn load_ply(path: &Path) -> Result<PointCloud, IoError> {
    parse_ply(&std::fs::read(path)?)
}

pub fn save_ply(cloud: &PointCloud, path: &Path) -> Result<(), IoError> {
    Ok(std::fs::write(path, write_ply(cloud))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_cloud() -> PointCloud {
        PointCloud::with_normals(
            vec![Vec3::new(0.1, -0.2, 0.3), Vec3::new(1.0, 2.0, -3.0)],
            vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn round_trips_bitwise() {
        let cloud = sample_cloud();
        assert_eq!(parse_ply(&write_ply(&cloud)).unwrap(), cloud);
        let bare = PointCloud::new(cloud.points.clone());
        assert_eq!(parse_ply(&write_ply(&bare)).unwrap(), bare);
    }

    #[test]
    fn float32_and_extra_properties_are_read() {
        let mut bytes = b"ply\nformat binary_little_endian 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nproperty uchar quality\nend_header\n".to_vec();
        bytes.extend_from_slice(&1.5f32.to_le_bytes());
        bytes.extend_from_slice(&(-2.0f32).to_le_bytes());
        bytes.extend_from_slice(&0.25f32.to_le_bytes());
        bytes.push(7);
        let cloud = parse_ply(&bytes).unwrap();
        assert_eq!(cloud.points, vec![Vec3::new(1.5, -2.0, 0.25)]);
    }

    #[test]
    fn rejects_ascii_format() {
        let bytes = b"ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
        assert!(parse_ply(bytes).is_err());
    }

    #[test]
    fn rejects_size_mismatch_and_hostile_counts() {
        let cloud = sample_cloud();
        let bytes = write_ply(&cloud);
        assert!(parse_ply(&bytes[..bytes.len() - 1]).is_err());
        let hostile = b"ply\nformat binary_little_endian 1.0\nelement vertex 4294967295\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
        assert!(parse_ply(hostile).is_err());
    }

    #[test]
    fn rejects_missing_coordinates() {
        let bytes = b"ply\nformat binary_little_endian 1.0\nelement vertex 0\nproperty float x\nproperty float y\nend_header\n";
        assert!(parse_ply(bytes).is_err());
    }
}
