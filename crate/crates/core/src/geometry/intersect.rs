//! Ray–triangle and ray–mesh intersection.

use super::{Ray, TriangleMesh, Vec3};

/// Nearest intersection of a ray with a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    pub point: Vec3,
    /// Unit normal of the hit triangle, from its winding order.
    pub normal: Vec3,
    pub t: f64,
    pub triangle: usize,
}

/// Möller–Trumbore with inclusive edge tests, so rays through a shared edge
/// register on both adjacent triangles and the index tie-break below picks one.
pub fn ray_triangle_intersect(ray: &Ray, a: Vec3, b: Vec3, c: Vec3) -> Option<f64> {
    let e1 = b - a;
    let e2 = c - a;
    let p = ray.direction.cross(e2);
    let det = e1.dot(p);
    if det.abs() < 1e-300 {
        return None; // parallel to the triangle plane
    }
    let inv_det = 1.0 / det;
    let s = ray.origin - a;
    let u = s.dot(p) * inv_det;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = s.cross(e1);
    let v = ray.direction.dot(q) * inv_det;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let t = e2.dot(q) * inv_det;
    if t > 0.0 && t <= ray.max_range {
        Some(t)
    } else {
        None
    }
}

/// Nearest hit with `t` in (0, max_range]. Equal-distance hits (shared edges,
/// grazing rays) resolve to the lowest triangle index.
pub fn ray_mesh_intersect(ray: &Ray, mesh: &TriangleMesh) -> Option<RayHit> {
    let mut best: Option<(f64, usize)> = None;
    for (i, _) in mesh.triangles.iter().enumerate() {
        let (a, b, c) = mesh.triangle_vertices(i);
        if let Some(t) = ray_triangle_intersect(ray, a, b, c) {
            // strict < keeps the first (lowest-index) triangle on exact ties
            if best.map_or(true, |(bt, _)| t < bt) {
                best = Some((t, i));
            }
        }
    }
    best.map(|(t, triangle)| RayHit {
        point: ray.point_at(t),
        normal: mesh.face_normal(triangle),
        t,
        triangle,
    })
}
