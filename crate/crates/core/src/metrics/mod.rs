//! Evaluation distances between point clouds and poses: Chamfer, Hausdorff,
//! exact Earth Mover's distance, and the symmetry-tolerant ADI pose error.

mod assignment;

pub use assignment::solve_assignment;

use thiserror::Error;

use crate::geometry::spatial::{nearest_brute_force, KdTree};
use crate::geometry::{PointCloud, UnitQuaternion, Vec3};

/// Above this size nearest-neighbor queries go through a k-d tree; below it
/// a linear scan is faster and serves as the reference path.
const KDTREE_CUTOVER: usize = 256;

/// Exact EMD is solved by an O(n^3) assignment; larger inputs must be
/// subsampled by the caller.
pub const EMD_MAX_POINTS: usize = 512;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("metric requires non-empty point clouds")]
    EmptyCloud,
    #[error("exact EMD size limit is {max} points, got {got}; subsample first")]
    EmdSizeLimit { max: usize, got: usize },
}

/// Ground-truth and estimated pose pair scored by [`adi_error`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseGT {
    pub r_gt: UnitQuaternion,
    pub t_gt: Vec3,
    pub r_est: UnitQuaternion,
    pub t_est: Vec3,
}

/// Distance from every point of `from` to its nearest neighbor in `to`.
fn nearest_distances(from: &[Vec3], to: &[Vec3]) -> Vec<f64> {
    if to.len() > KDTREE_CUTOVER {
        let tree = KdTree::build(to);
        from.iter().map(|&p| tree.nearest(p).unwrap().1).collect()
    } else {
        from.iter()
            .map(|&p| nearest_brute_force(to, p).unwrap().1)
            .collect()
    }
}

/// Chamfer distance: mean nearest-neighbor L2 distance a→b plus the same b→a.
/// Distances, not squared distances.
pub fn chamfer_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptyCloud);
    }
    let ab = nearest_distances(&a.points, &b.points);
    let ba = nearest_distances(&b.points, &a.points);
    let mean_ab = ab.iter().sum::<f64>() / ab.len() as f64;
    let mean_ba = ba.iter().sum::<f64>() / ba.len() as f64;
    Ok(mean_ab + mean_ba)
}

/// One-sided Chamfer term (mean nearest-neighbor distance from `a` into `b`).
pub fn chamfer_one_sided(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptyCloud);
    }
    let d = nearest_distances(&a.points, &b.points);
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

/// Hausdorff distance: max of the two directed max-min distances.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptyCloud);
    }
    let ab = nearest_distances(&a.points, &b.points);
    let ba = nearest_distances(&b.points, &a.points);
    let d_ab = ab.iter().fold(0.0_f64, |m, &d| m.max(d));
    let d_ba = ba.iter().fold(0.0_f64, |m, &d| m.max(d));
    Ok(d_ab.max(d_ba))
}

/// Exact Earth Mover's distance: minimum over bijections of the mean matched
/// L2 distance. Unequal sizes are reduced by uniformly subsampling the larger
/// cloud (seeded) to the smaller before matching.
pub fn earth_mover_distance(
    a: &PointCloud,
    b: &PointCloud,
    seed: u64,
) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptyCloud);
    }
    let n = a.len().min(b.len());
    if n > EMD_MAX_POINTS {
        return Err(MetricsError::EmdSizeLimit { max: EMD_MAX_POINTS, got: n });
    }
    let a_sub;
    let b_sub;
    let (pa, pb) = {
        a_sub = a.subsampled(n, crate::rng::split(seed, 0));
        b_sub = b.subsampled(n, crate::rng::split(seed, 1));
        (&a_sub.points, &b_sub.points)
    };
    let cost: Vec<Vec<f64>> = pa
        .iter()
        .map(|&p| pb.iter().map(|&q| p.distance(q)).collect())
        .collect();
    let assign = solve_assignment(&cost);
    let total: f64 = assign.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    Ok(total / n as f64)
}

/// Average Distance with Indistinguishable views: mean over model points of
/// the minimum distance between the ground-truth placement of one point and
/// the estimated placement of any point. Both points range over `model`.
pub fn adi_error(model: &PointCloud, poses: &PoseGT) -> Result<f64, MetricsError> {
    if model.is_empty() {
        return Err(MetricsError::EmptyCloud);
    }
    let est: Vec<Vec3> = model
        .points
        .iter()
        .map(|&p| poses.r_est.rotate(p) + poses.t_est)
        .collect();
    let gt: Vec<Vec3> = model
        .points
        .iter()
        .map(|&p| poses.r_gt.rotate(p) + poses.t_gt)
        .collect();
    let d = nearest_distances(&gt, &est);
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}
