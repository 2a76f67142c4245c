//! Procedural test objects: primitive meshes and randomized category
//! generators (surfaces of revolution for drinkware, chamfered prisms for
//! boxy containers). All generated objects sit on the z = 0 plane, centered
//! on the z axis, and are wound counter-clockwise seen from outside.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

use crate::geometry::{TriangleMesh, Vec3};
use crate::rng::rng_from;

/// Axis-aligned box between `min` and `max`.
pub fn box_mesh(min: Vec3, max: Vec3) -> TriangleMesh {
    let (a, b) = (min, max);
    let v = vec![
        Vec3::new(a.x, a.y, a.z),
        Vec3::new(b.x, a.y, a.z),
        Vec3::new(b.x, b.y, a.z),
        Vec3::new(a.x, b.y, a.z),
        Vec3::new(a.x, a.y, b.z),
        Vec3::new(b.x, a.y, b.z),
        Vec3::new(b.x, b.y, b.z),
        Vec3::new(a.x, b.y, b.z),
    ];
    let t = vec![
        // bottom (-z), top (+z)
        [0, 2, 1],
        [0, 3, 2],
        [4, 5, 6],
        [4, 6, 7],
        // -y, +y
        [0, 1, 5],
        [0, 5, 4],
        [2, 3, 7],
        [2, 7, 6],
        // -x, +x
        [0, 4, 7],
        [0, 7, 3],
        [1, 2, 6],
        [1, 6, 5],
    ];
    TriangleMesh::new(v, t).expect("box mesh is valid")
}

/// Single rectangle (two triangles) centered at `center`, facing `normal`.
pub fn wall_mesh(center: Vec3, normal: Vec3, half_width: f64, half_height: f64) -> TriangleMesh {
    let n = normal.normalized().expect("wall normal must be non-zero");
    let up = if n.z.abs() > 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 0.0, 1.0) };
    let u = up.cross(n).normalized().unwrap();
    let w = n.cross(u);
    let v = vec![
        center - u * half_width - w * half_height,
        center + u * half_width - w * half_height,
        center + u * half_width + w * half_height,
        center - u * half_width + w * half_height,
    ];
    // wound so the face normal equals `normal`
    TriangleMesh::new(v, vec![[0, 1, 2], [0, 2, 3]]).expect("wall mesh is valid")
}

/// Lathe of a 2D profile `(radius, z)` around the z axis. Endpoint rings with
/// positive radius get cap fans; zero-radius endpoints close naturally.
pub fn revolve_mesh(profile: &[(f64, f64)], segments: usize) -> TriangleMesh {
    assert!(profile.len() >= 2 && segments >= 3);
    let mut vertices = Vec::new();
    let mut ring_start = Vec::new();
    for &(r, z) in profile {
        ring_start.push(vertices.len());
        for s in 0..segments {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / segments as f64;
            vertices.push(Vec3::new(r * theta.cos(), r * theta.sin(), z));
        }
    }
    let mut triangles = Vec::new();
    for i in 0..profile.len() - 1 {
        let (r0, r1) = (ring_start[i], ring_start[i + 1]);
        for s in 0..segments {
            let s1 = (s + 1) % segments;
            triangles.push([r0 + s, r0 + s1, r1 + s1]);
            triangles.push([r0 + s, r1 + s1, r1 + s]);
        }
    }
    // caps
    if profile[0].0 > 1e-9 {
        let c = vertices.len();
        vertices.push(Vec3::new(0.0, 0.0, profile[0].1));
        for s in 0..segments {
            let s1 = (s + 1) % segments;
            triangles.push([c, ring_start[0] + s1, ring_start[0] + s]);
        }
    }
    let last = profile.len() - 1;
    if profile[last].0 > 1e-9 {
        let c = vertices.len();
        vertices.push(Vec3::new(0.0, 0.0, profile[last].1));
        for s in 0..segments {
            let s1 = (s + 1) % segments;
            triangles.push([c, ring_start[last] + s, ring_start[last] + s1]);
        }
    }
    TriangleMesh::new(vertices, triangles).expect("revolve mesh is valid")
}

/// Upright cylinder with its base disk centered at `base_center`.
pub fn cylinder_mesh(base_center: Vec3, radius: f64, height: f64, segments: usize) -> TriangleMesh {
    let mut mesh = revolve_mesh(&[(radius, 0.0), (radius, height)], segments);
    for v in &mut mesh.vertices {
        *v = *v + base_center;
    }
    mesh
}

/// UV sphere.
pub fn sphere_mesh(center: Vec3, radius: f64, rings: usize, segments: usize) -> TriangleMesh {
    assert!(rings >= 2 && segments >= 3);
    let mut profile = Vec::with_capacity(rings + 1);
    for i in 0..=rings {
        let phi = std::f64::consts::PI * i as f64 / rings as f64;
        profile.push((radius * phi.sin(), -radius * phi.cos()));
    }
    let mut mesh = revolve_mesh(&profile, segments);
    for v in &mut mesh.vertices {
        *v = *v + center;
    }
    mesh
}

/// Loft of a convex 2D cross-section through scaled copies at given heights:
/// sections are `(scale, z)` applied to `section` points, end caps fanned from
/// the section centroid.
pub fn loft_mesh(section: &[(f64, f64)], rings: &[(f64, f64)]) -> TriangleMesh {
    assert!(section.len() >= 3 && rings.len() >= 2);
    let n = section.len();
    let mut vertices = Vec::new();
    for &(scale, z) in rings {
        for &(x, y) in section {
            vertices.push(Vec3::new(x * scale, y * scale, z));
        }
    }
    let mut triangles = Vec::new();
    for i in 0..rings.len() - 1 {
        let (r0, r1) = (i * n, (i + 1) * n);
        for s in 0..n {
            let s1 = (s + 1) % n;
            triangles.push([r0 + s, r0 + s1, r1 + s1]);
            triangles.push([r0 + s, r1 + s1, r1 + s]);
        }
    }
    let centroid = {
        let (mut cx, mut cy) = (0.0, 0.0);
        for &(x, y) in section {
            cx += x;
            cy += y;
        }
        (cx / n as f64, cy / n as f64)
    };
    let bottom = vertices.len();
    vertices.push(Vec3::new(centroid.0 * rings[0].0, centroid.1 * rings[0].0, rings[0].1));
    for s in 0..n {
        let s1 = (s + 1) % n;
        triangles.push([bottom, s1, s]);
    }
    let top = vertices.len();
    let last = rings.len() - 1;
    vertices.push(Vec3::new(
        centroid.0 * rings[last].0,
        centroid.1 * rings[last].0,
        rings[last].1,
    ));
    for s in 0..n {
        let s1 = (s + 1) % n;
        triangles.push([top, last * n + s, last * n + s1]);
    }
    TriangleMesh::new(vertices, triangles).expect("loft mesh is valid")
}

/// Rectangular cross-section with chamfered corners, counter-clockwise.
fn chamfered_rect(half_w: f64, half_d: f64, chamfer: f64) -> Vec<(f64, f64)> {
    let c = chamfer.min(half_w * 0.9).min(half_d * 0.9);
    vec![
        (half_w, half_d - c),
        (half_w - c, half_d),
        (-(half_w - c), half_d),
        (-half_w, half_d - c),
        (-half_w, -(half_d - c)),
        (-(half_w - c), -half_d),
        (half_w - c, -half_d),
        (half_w, -(half_d - c)),
    ]
}

/// Object categories mirroring common transparent household containers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Bottle,
    Cup,
    Wineglass,
    Can,
    Detergent,
    Spray,
    Cylinder,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Bottle,
        Category::Cup,
        Category::Wineglass,
        Category::Can,
        Category::Detergent,
        Category::Spray,
        Category::Cylinder,
    ];
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Bottle => "bottle",
            Category::Cup => "cup",
            Category::Wineglass => "wineglass",
            Category::Can => "can",
            Category::Detergent => "detergent",
            Category::Spray => "spray",
            Category::Cylinder => "cylinder",
        };
        f.write_str(s)
    }
}

impl FromStr for Category {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bottle" => Ok(Category::Bottle),
            "cup" => Ok(Category::Cup),
            "wineglass" => Ok(Category::Wineglass),
            "can" => Ok(Category::Can),
            "detergent" => Ok(Category::Detergent),
            "spray" => Ok(Category::Spray),
            "cylinder" => Ok(Category::Cylinder),
            other => Err(format!("unknown category '{other}'")),
        }
    }
}

/// Randomized instance of a category; proportions vary per seed so instances
/// share a family resemblance without being identical.
pub fn generate_category_mesh(category: Category, seed: u64) -> TriangleMesh {
    let mut rng = rng_from(seed);
    let mut r = |lo: f64, hi: f64| rng.random_range(lo..hi);
    const SEG: usize = 40;
    match category {
        Category::Cylinder => {
            let radius = r(0.02, 0.05);
            let height = r(0.08, 0.2);
            cylinder_mesh(Vec3::ZERO, radius, height, SEG)
        }
        Category::Can => {
            let radius = r(0.028, 0.045);
            let height = r(0.09, 0.15);
            revolve_mesh(
                &[(radius * 0.92, 0.0), (radius, 0.012), (radius, height - 0.012), (radius * 0.92, height)],
                SEG,
            )
        }
        Category::Bottle => {
            let rb = r(0.025, 0.042);
            let body_h = r(0.1, 0.16);
            let rn = r(0.009, 0.016);
            let neck_h = r(0.03, 0.06);
            let shoulder = r(0.015, 0.03);
            revolve_mesh(
                &[
                    (rb, 0.0),
                    (rb, body_h),
                    (rb * 0.85, body_h + shoulder * 0.55),
                    (rn, body_h + shoulder),
                    (rn, body_h + shoulder + neck_h),
                ],
                SEG,
            )
        }
        Category::Cup => {
            let rb = r(0.024, 0.036);
            let taper = r(1.1, 1.4);
            let height = r(0.07, 0.12);
            revolve_mesh(&[(rb, 0.0), (rb * taper, height)], SEG)
        }
        Category::Wineglass => {
            let base_r = r(0.028, 0.04);
            let stem_r = r(0.004, 0.007);
            let stem_h = r(0.05, 0.09);
            let bowl_r = r(0.03, 0.046);
            let bowl_h = r(0.05, 0.08);
            let base_h = 0.006;
            revolve_mesh(
                &[
                    (base_r, 0.0),
                    (base_r, base_h),
                    (stem_r, base_h + 0.01),
                    (stem_r, base_h + stem_h),
                    (bowl_r * 0.75, base_h + stem_h + bowl_h * 0.22),
                    (bowl_r, base_h + stem_h + bowl_h * 0.55),
                    (bowl_r * 0.92, base_h + stem_h + bowl_h),
                ],
                SEG,
            )
        }
        Category::Detergent => {
            let half_w = r(0.03, 0.046);
            let half_d = r(0.02, 0.032);
            let height = r(0.15, 0.24);
            let section = chamfered_rect(half_w, half_d, 0.012);
            loft_mesh(&section, &[(1.0, 0.0), (1.0, height * 0.82), (0.55, height)])
        }
        Category::Spray => {
            let half_w = r(0.026, 0.04);
            let half_d = r(0.022, 0.034);
            let height = r(0.16, 0.24);
            let section = chamfered_rect(half_w, half_d, 0.01);
            loft_mesh(
                &section,
                &[
                    (1.0, 0.0),
                    (1.0, height * 0.6),
                    (0.45, height * 0.7),
                    (0.42, height),
                ],
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ray_mesh_intersect, Ray};

    #[test]
    fn box_mesh_winds_outward() {
        let mesh = box_mesh(Vec3::ZERO, Vec3::new(1.0, 1.0, 1.0));
        assert_eq!(mesh.triangles.len(), 12);
        let center = Vec3::splat(0.5);
        for i in 0..mesh.triangles.len() {
            let (a, b, c) = mesh.triangle_vertices(i);
            let face_center = (a + b + c) / 3.0;
            assert!(
                mesh.face_normal(i).dot(face_center - center) > 0.0,
                "triangle {i} winds inward"
            );
        }
    }

    #[test]
    fn category_meshes_are_closed_enough_for_raycasts() {
        // outward probes toward the axis must hit every generated object
        for (k, &cat) in Category::ALL.iter().enumerate() {
            let mesh = generate_category_mesh(cat, 100 + k as u64);
            let aabb = mesh.aabb().unwrap();
            assert!(aabb.min.z.abs() < 1e-9, "{cat} must sit on z = 0");
            let z_mid = aabb.max.z * 0.4;
            for dir_deg in [0.0, 45.0, 90.0, 180.0, 270.0] {
                let theta: f64 = (dir_deg as f64).to_radians();
                let start = Vec3::new(0.3 * theta.cos(), 0.3 * theta.sin(), z_mid);
                let ray = Ray::new(start, -start.normalized().unwrap().component_mul(Vec3::new(1.0, 1.0, 0.0)) , 1.0);
                let ray = match ray {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                assert!(
                    ray_mesh_intersect(&ray, &mesh).is_some(),
                    "{cat}: horizontal probe at {dir_deg} deg missed"
                );
            }
        }
    }

    #[test]
    fn sphere_mesh_vertices_on_sphere() {
        let c = Vec3::new(0.1, -0.2, 0.3);
        let mesh = sphere_mesh(c, 0.25, 12, 24);
        for &v in &mesh.vertices {
            assert!(((v - c).norm() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn category_generation_is_deterministic() {
        let a = generate_category_mesh(Category::Bottle, 7);
        let b = generate_category_mesh(Category::Bottle, 7);
        assert_eq!(a, b);
        let c = generate_category_mesh(Category::Bottle, 8);
        assert_ne!(a, c);
    }
}
