//! Core 3D types shared by every module: vectors, unit quaternions, point
//! clouds, triangle meshes, axis-aligned boxes and rays.

mod intersect;
mod sampling;
pub mod spatial;

pub use intersect::{ray_mesh_intersect, ray_triangle_intersect, RayHit};
pub use sampling::{
    normalize_to_unit_cube, sample_surface, subsample_to_count, voxel_subsample,
    voxel_subsample_with_origin, NormalizeTransform,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("operation requires a non-empty point cloud")]
    EmptyCloud,
    #[error("operation requires a non-empty mesh")]
    EmptyMesh,
    #[error("all points are identical; scale is undefined")]
    DegenerateCloud,
    #[error("quaternion norm {norm} is not unit (tolerance {tol})")]
    NonUnitQuaternion { norm: f64, tol: f64 },
    #[error("quaternion has near-zero norm and cannot be normalized")]
    ZeroQuaternion,
    #[error("ray direction must be non-zero")]
    ZeroDirection,
    #[error("ray max_range must be positive, got {0}")]
    NonPositiveRange(f64),
    #[error("triangle index {index} out of range for {vertices} vertices")]
    IndexOutOfRange { index: usize, vertices: usize },
    #[error("voxel size must be positive, got {0}")]
    NonPositiveVoxel(f64),
    #[error("normals list length {normals} does not match point count {points}")]
    NormalCountMismatch { normals: usize, points: usize },
}

/// 3D vector / point, in meters unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn splat(v: f64) -> Self {
        Vec3::new(v, v, v)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector along `self`; `None` for near-zero vectors.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self / n)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Componentwise product (used for per-axis scale).
    pub fn component_mul(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x * o.x, self.y * o.y, self.z * o.z)
    }

    pub fn min_components(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max_components(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl std::ops::Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl std::ops::Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

/// Unit quaternion, scalar-first (w, x, y, z). Always stored normalized.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Accepts components already close to unit norm (within `1e-6`) and
    /// renormalizes; anything further off is rejected.
    pub fn from_components(w: f64, x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(GeometryError::NonUnitQuaternion { norm, tol: 1e-6 });
        }
        Ok(UnitQuaternion { w: w / norm, x: x / norm, y: y / norm, z: z / norm })
    }

    /// Normalizes arbitrary components; rejects near-zero norm.
    pub fn normalize(w: f64, x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if norm < 1e-12 {
            return Err(GeometryError::ZeroQuaternion);
        }
        Ok(UnitQuaternion { w: w / norm, x: x / norm, y: y / norm, z: z / norm })
    }

    pub fn from_axis_angle(axis: Vec3, angle_rad: f64) -> Result<Self, GeometryError> {
        let axis = axis.normalized().ok_or(GeometryError::ZeroDirection)?;
        let half = angle_rad * 0.5;
        let s = half.sin();
        UnitQuaternion::normalize(half.cos(), axis.x * s, axis.y * s, axis.z * s)
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conjugate(self) -> UnitQuaternion {
        UnitQuaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Hamilton product, renormalized to keep the unit invariant.
    pub fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        let (w, x, y, z) = quat_product(
            (self.w, self.x, self.y, self.z),
            (o.w, o.x, o.y, o.z),
        );
        // inputs are unit, so the norm is 1 up to rounding
        let n = (w * w + x * x + y * y + z * z).sqrt();
        UnitQuaternion { w: w / n, x: x / n, y: y / n, z: z / n }
    }

    /// Rotation action q v q*.
    pub fn rotate(self, v: Vec3) -> Vec3 {
        // q v q* expanded via the cross-product form
        let u = Vec3::new(self.x, self.y, self.z);
        let t = u.cross(v) * 2.0;
        v + t * self.w + u.cross(t)
    }

    /// Equivalent rotation matrix, row-major.
    pub fn to_matrix(self) -> [[f64; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    /// Angle of the relative rotation between `self` and `o`, radians in [0, pi].
    pub fn angle_to(self, o: UnitQuaternion) -> f64 {
        let dot = (self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z)
            .abs()
            .clamp(0.0, 1.0);
        2.0 * dot.acos()
    }

    pub fn to_wxyz(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

/// Raw Hamilton product on (w, x, y, z) tuples; no normalization.
pub(crate) fn quat_product(
    a: (f64, f64, f64, f64),
    b: (f64, f64, f64, f64),
) -> (f64, f64, f64, f64) {
    let (aw, ax, ay, az) = a;
    let (bw, bx, by, bz) = b;
    (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )
}

/// Ordered list of 3D points with optional unit normals of the same length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>) -> Self {
        PointCloud { points, normals: None }
    }

    pub fn with_normals(points: Vec<Vec3>, normals: Vec<Vec3>) -> Result<Self, GeometryError> {
        if normals.len() != points.len() {
            return Err(GeometryError::NormalCountMismatch {
                normals: normals.len(),
                points: points.len(),
            });
        }
        Ok(PointCloud { points, normals: Some(normals) })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn aabb(&self) -> Result<Aabb, GeometryError> {
        compute_aabb(self)
    }

    /// Applies `p -> rot * (scale ∘ p) + t` to all points, rotating normals.
    pub fn transformed(&self, scale: Vec3, rot: UnitQuaternion, t: Vec3) -> PointCloud {
        let points = self
            .points
            .iter()
            .map(|p| rot.rotate(p.component_mul(scale)) + t)
            .collect();
        let normals = self
            .normals
            .as_ref()
            .map(|ns| ns.iter().map(|n| rot.rotate(*n)).collect());
        PointCloud { points, normals }
    }

    /// Uniform random subsample without replacement, in index order.
    pub fn subsampled(&self, n: usize, seed: u64) -> PointCloud {
        if n >= self.len() {
            return self.clone();
        }
        use rand::seq::index::sample;
        let mut rng = crate::rng::rng_from(seed);
        let mut idx: Vec<usize> = sample(&mut rng, self.len(), n).into_iter().collect();
        idx.sort_unstable();
        let points = idx.iter().map(|&i| self.points[i]).collect();
        let normals = self
            .normals
            .as_ref()
            .map(|ns| idx.iter().map(|&i| ns[i]).collect());
        PointCloud { points, normals }
    }

    pub fn centroid(&self) -> Result<Vec3, GeometryError> {
        if self.is_empty() {
            return Err(GeometryError::EmptyCloud);
        }
        let sum = self.points.iter().fold(Vec3::ZERO, |a, &p| a + p);
        Ok(sum / self.points.len() as f64)
    }
}

/// Axis-aligned bounding box, `min <= max` componentwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn max_extent(&self) -> f64 {
        let e = self.extent();
        e.x.max(e.y).max(e.z)
    }

    pub fn diagonal(&self) -> f64 {
        self.extent().norm()
    }

    pub fn inflated(&self, by: f64) -> Aabb {
        Aabb { min: self.min - Vec3::splat(by), max: self.max + Vec3::splat(by) }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

/// Componentwise min/max of a non-empty cloud.
pub fn compute_aabb(cloud: &PointCloud) -> Result<Aabb, GeometryError> {
    let first = *cloud.points.first().ok_or(GeometryError::EmptyCloud)?;
    let mut min = first;
    let mut max = first;
    for &p in &cloud.points[1..] {
        min = min.min_components(p);
        max = max.max_components(p);
    }
    Ok(Aabb { min, max })
}

/// Ray with unit direction and positive maximum range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Vec3,
    pub direction: Vec3,
    pub max_range: f64,
}

impl Ray {
    pub fn new(origin: Vec3, direction: Vec3, max_range: f64) -> Result<Self, GeometryError> {
        let direction = direction.normalized().ok_or(GeometryError::ZeroDirection)?;
        if max_range <= 0.0 {
            return Err(GeometryError::NonPositiveRange(max_range));
        }
        Ok(Ray { origin, direction, max_range })
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        self.origin + self.direction * t
    }
}

/// Indexed triangle mesh. Builders are expected to wind triangles
/// counter-clockwise seen from outside, so face normals point outward.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriangleMesh {
    /// Validates indices and drops zero-area triangles.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self, GeometryError> {
        for tri in &triangles {
            for &i in tri {
                if i >= vertices.len() {
                    return Err(GeometryError::IndexOutOfRange { index: i, vertices: vertices.len() });
                }
            }
        }
        let mut mesh = TriangleMesh { vertices, triangles };
        mesh.remove_degenerate_triangles();
        Ok(mesh)
    }

    /// Drops triangles whose area is below ~1e-12 m² (micron-scale slivers).
    pub fn remove_degenerate_triangles(&mut self) {
        let verts = &self.vertices;
        self.triangles.retain(|t| {
            let a = verts[t[0]];
            let b = verts[t[1]];
            let c = verts[t[2]];
            (b - a).cross(c - a).norm_squared() > 4e-24
        });
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle_vertices(&self, i: usize) -> (Vec3, Vec3, Vec3) {
        let [a, b, c] = self.triangles[i];
        (self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn triangle_area(&self, i: usize) -> f64 {
        let (a, b, c) = self.triangle_vertices(i);
        0.5 * (b - a).cross(c - a).norm()
    }

    /// Unit normal from the winding order (outward for CCW-from-outside).
    pub fn face_normal(&self, i: usize) -> Vec3 {
        let (a, b, c) = self.triangle_vertices(i);
        (b - a).cross(c - a).normalized().unwrap_or(Vec3::new(0.0, 0.0, 1.0))
    }

    pub fn aabb(&self) -> Result<Aabb, GeometryError> {
        if self.vertices.is_empty() {
            return Err(GeometryError::EmptyMesh);
        }
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for &v in &self.vertices[1..] {
            min = min.min_components(v);
            max = max.max_components(v);
        }
        Ok(Aabb { min, max })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quat_90deg_about_z_rotates_x_to_y() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = UnitQuaternion::from_components(s, 0.0, 0.0, s).unwrap();
        let v = q.rotate(Vec3::new(1.0, 0.0, 0.0));
        assert!((v - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_quaternion_leaves_vectors_unchanged() {
        let v = Vec3::new(0.3, -1.2, 2.5);
        assert_eq!(UnitQuaternion::IDENTITY.rotate(v), v);
    }

    #[test]
    fn non_unit_quaternion_rejected() {
        let err = UnitQuaternion::from_components(1.0, 1.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, GeometryError::NonUnitQuaternion { .. }));
    }

    #[test]
    fn rotate_agrees_with_matrix_on_random_pairs() {
        let mut rng = crate::rng::rng_from(17);
        use rand::Rng as _;
        for _ in 0..1000 {
            let q = UnitQuaternion::normalize(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
            .unwrap();
            let v = Vec3::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let m = q.to_matrix();
            let mv = Vec3::new(
                m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
            );
            assert!((q.rotate(v) - mv).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_inverts_rotation() {
        let q = UnitQuaternion::from_axis_angle(Vec3::new(1.0, 2.0, -0.5), 1.1).unwrap();
        let v = Vec3::new(0.2, 0.7, -0.4);
        let back = q.conjugate().rotate(q.rotate(v));
        assert!((back - v).norm() < 1e-12);
    }

    #[test]
    fn aabb_of_two_points() {
        let cloud = PointCloud::new(vec![Vec3::ZERO, Vec3::new(1.0, 2.0, 3.0)]);
        let b = compute_aabb(&cloud).unwrap();
        assert_eq!(b.min, Vec3::ZERO);
        assert_eq!(b.max, Vec3::new(1.0, 2.0, 3.0));
    }

    #[test]
    fn aabb_single_point_is_degenerate() {
        let p = Vec3::new(0.5, -0.25, 4.0);
        let b = compute_aabb(&PointCloud::new(vec![p])).unwrap();
        assert_eq!(b.min, p);
        assert_eq!(b.max, p);
    }

    #[test]
    fn aabb_empty_errors() {
        assert_eq!(compute_aabb(&PointCloud::default()).unwrap_err(), GeometryError::EmptyCloud);
    }

    #[test]
    fn mesh_drops_degenerate_triangles() {
        let mesh = TriangleMesh::new(
            vec![Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2], [0, 1, 1], [0, 0, 0]],
        )
        .unwrap();
        assert_eq!(mesh.triangles.len(), 1);
    }

    #[test]
    fn mesh_rejects_out_of_range_index() {
        let err = TriangleMesh::new(vec![Vec3::ZERO], vec![[0, 0, 3]]).unwrap_err();
        assert!(matches!(err, GeometryError::IndexOutOfRange { .. }));
    }

    proptest! {
        #[test]
        fn quat_mul_stays_unit(ax in -1.0..1.0f64, ay in -1.0..1.0f64, az in -1.0..1.0f64, aw in -1.0..1.0f64,
                               bx in -1.0..1.0f64, by in -1.0..1.0f64, bz in -1.0..1.0f64, bw in -1.0..1.0f64) {
            prop_assume!((aw*aw + ax*ax + ay*ay + az*az) > 1e-6);
            prop_assume!((bw*bw + bx*bx + by*by + bz*bz) > 1e-6);
            let a = UnitQuaternion::normalize(aw, ax, ay, az).unwrap();
            let b = UnitQuaternion::normalize(bw, bx, by, bz).unwrap();
            prop_assert!((a.mul(b).norm() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn quat_rotate_preserves_norm(w in -1.0..1.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
                                      vx in -3.0..3.0f64, vy in -3.0..3.0f64, vz in -3.0..3.0f64) {
            prop_assume!((w*w + x*x + y*y + z*z) > 1e-6);
            let q = UnitQuaternion::normalize(w, x, y, z).unwrap();
            let v = Vec3::new(vx, vy, vz);
            prop_assert!((q.rotate(v).norm() - v.norm()).abs() < 1e-12 * (1.0 + v.norm()));
        }

        #[test]
        fn quat_mul_associative(seed in 0u64..1000) {
            let mut rng = crate::rng::rng_from(seed);
            use rand::Rng as _;
            let mut q = || {
                UnitQuaternion::normalize(
                    rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).unwrap()
            };
            let (a, b, c) = (q(), q(), q());
            let lhs = a.mul(b).mul(c);
            let rhs = a.mul(b.mul(c));
            prop_assert!((lhs.w - rhs.w).abs() < 1e-12);
            prop_assert!((lhs.x - rhs.x).abs() < 1e-12);
            prop_assert!((lhs.y - rhs.y).abs() < 1e-12);
            prop_assert!((lhs.z - rhs.z).abs() < 1e-12);
        }

        #[test]
        fn aabb_invariant_under_permutation(pts in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64), 1..40), rot in 0usize..40) {
            let points: Vec<Vec3> = pts.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect();
            let mut rotated = points.clone();
            rotated.rotate_left(rot % points.len().max(1));
            let a = compute_aabb(&PointCloud::new(points)).unwrap();
            let b = compute_aabb(&PointCloud::new(rotated)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
