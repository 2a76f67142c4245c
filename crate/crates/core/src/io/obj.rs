//! ASCII OBJ: `v` and `f` records, 1-based indices, polygon faces
//! fan-triangulated. Other record types are skipped.

use std::path::Path;

use super::IoError;
use crate::geometry::{TriangleMesh, Vec3};

fn parse_coord(tok: &str, line: usize) -> Result<f64, IoError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| IoError::ObjParse { line, msg: format!("bad coordinate '{tok}'") })?;
    if !v.is_finite() {
        return Err(IoError::ObjParse { line, msg: format!("non-finite coordinate '{tok}'") });
    }
    Ok(v)
}

/// Face vertex tokens look like `i`, `i/t`, `i//n` or `i/t/n`; only the
/// leading vertex index matters here.
fn parse_face_index(tok: &str, n_vertices: usize, line: usize) -> Result<usize, IoError> {
    let lead = tok.split('/').next().unwrap_or("");
    let idx: i64 = lead
        .parse()
        .map_err(|_| IoError::ObjParse { line, msg: format!("bad face index '{tok}'") })?;
    if idx < 1 {
        return Err(IoError::ObjParse {
            line,
            msg: format!("face index {idx} must be positive (1-based)"),
        });
    }
    let zero_based = (idx - 1) as usize;
    if zero_based >= n_vertices {
        return Err(IoError::ObjParse {
            line,
            msg: format!("face index {idx} out of range ({n_vertices} vertices)"),
        });
    }
    Ok(zero_based)
}

pub fn parse_obj(text: &str) -> Result<TriangleMesh, IoError> {
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let mut xyz = [0.0; 3];
                for c in &mut xyz {
                    let tok = toks.next().ok_or(IoError::ObjParse {
                        line: line_no,
                        msg: "vertex needs 3 coordinates".into(),
                    })?;
                    *c = parse_coord(tok, line_no)?;
                }
                vertices.push(Vec3::from(xyz));
            }
            Some("f") => {
                let idx: Vec<usize> = toks
                    .map(|t| parse_face_index(t, vertices.len(), line_no))
                    .collect::<Result<_, _>>()?;
                if idx.len() < 3 {
                    return Err(IoError::ObjParse {
                        line: line_no,
                        msg: format!("face needs at least 3 vertices, got {}", idx.len()),
                    });
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {} // vn, vt, o, g, s, mtllib, usemtl, ...
        }
    }
    Ok(TriangleMesh::new(vertices, triangles)?)
}

pub fn write_obj(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    for t in &mesh.triangles {
        out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
    }
    out
}

pub fn load_obj(path: &Path) -> Result<TriangleMesh, IoError> {
    parse_obj(&std::fs::read_to_string(path)?)
}

pub fn save_obj(mesh: &TriangleMesh, path: &Path) -> Result<(), IoError> {
    Ok(std::fs::write(path, write_obj(mesh))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vertices_and_triangles() {
        let mesh = parse_obj("# cube corner\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
        assert_eq!(mesh.vertices.len(), 3);
        assert_eq!(mesh.triangles, vec![[0, 1, 2]]);
    }

    #[test]
    fn fan_triangulates_polygons() {
        let mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n").unwrap();
        assert_eq!(mesh.triangles, vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn accepts_slash_forms_and_skips_other_records() {
        let src = "mtllib x.mtl\nvt 0 0\nvn 0 0 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1/1 2/1/1 3//1\n";
        let mesh = parse_obj(src).unwrap();
        assert_eq!(mesh.triangles.len(), 1);
    }

    #[test]
    fn out_of_range_index_is_an_error() {
        let err = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn non_positive_index_is_an_error() {
        assert!(parse_obj("v 0 0 0\nf 0 1 1\n").is_err());
        assert!(parse_obj("v 0 0 0\nf -1 1 1\n").is_err());
    }

    #[test]
    fn non_finite_coordinate_is_an_error() {
        assert!(parse_obj("v inf 0 0\n").is_err());
        assert!(parse_obj("v NaN 0 0\n").is_err());
    }

    #[test]
    fn degenerate_faces_are_cleaned() {
        let mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 1 2\nf 1 2 3\n").unwrap();
        assert_eq!(mesh.triangles.len(), 1);
    }

    #[test]
    fn writer_round_trips() {
        let mesh = crate::shapes::box_mesh(Vec3::ZERO, Vec3::new(0.5, 1.0, 2.0));
        let back = parse_obj(&write_obj(&mesh)).unwrap();
        assert_eq!(back, mesh);
    }
}
