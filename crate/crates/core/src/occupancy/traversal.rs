//! Voxel ray traversal (Amanatides & Woo): exact, ordered, gap-free cell
//! enumeration of the segment [origin, origin + max_range * direction].

use super::GridConfig;
use crate::geometry::Ray;

/// A visited cell and the ray-parameter interval spent inside it. Corner
/// touches give zero-length spans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpan {
    pub cell: [usize; 3],
    pub t_enter: f64,
    pub t_exit: f64,
}

/// Ordered cells the segment passes through; empty if it misses the grid.
pub fn traverse_ray(config: &GridConfig, ray: &Ray) -> Vec<[usize; 3]> {
    traverse_ray_with_spans(config, ray)
        .into_iter()
        .map(|s| s.cell)
        .collect()
}

/// Like [`traverse_ray`] but keeps the entry/exit parameter of each cell.
pub fn traverse_ray_with_spans(config: &GridConfig, ray: &Ray) -> Vec<CellSpan> {
    let res = config.resolution;
    let gmin = config.origin;
    let gmax = config.aabb().max;

    // clip [0, max_range] to the grid box (slab test)
    let mut t0 = 0.0_f64;
    let mut t1 = ray.max_range;
    for axis in 0..3 {
        let o = ray.origin.component(axis);
        let d = ray.direction.component(axis);
        let lo = gmin.component(axis);
        let hi = gmax.component(axis);
        if d.abs() < 1e-300 {
            if o < lo || o > hi {
                return Vec::new();
            }
        } else {
            let (ta, tb) = ((lo - o) / d, (hi - o) / d);
            let (ta, tb) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            t0 = t0.max(ta);
            t1 = t1.min(tb);
        }
    }
    if t1 < t0 {
        return Vec::new();
    }

    let clamp_cell = |v: f64, axis: usize| -> i64 {
        (v.floor() as i64).clamp(0, config.dims[axis] as i64 - 1)
    };
    let entry = ray.point_at(t0);
    let mut cell = [
        clamp_cell((entry.x - gmin.x) / res, 0),
        clamp_cell((entry.y - gmin.y) / res, 1),
        clamp_cell((entry.z - gmin.z) / res, 2),
    ];

    // per-axis parameter of the next boundary crossing and its increment
    let mut t_max = [f64::INFINITY; 3];
    let mut t_delta = [f64::INFINITY; 3];
    let mut step = [0_i64; 3];
    for axis in 0..3 {
        let d = ray.direction.component(axis);
        if d.abs() < 1e-300 {
            continue;
        }
        step[axis] = if d > 0.0 { 1 } else { -1 };
        let next_boundary = if d > 0.0 {
            gmin.component(axis) + (cell[axis] + 1) as f64 * res
        } else {
            gmin.component(axis) + cell[axis] as f64 * res
        };
        t_max[axis] = (next_boundary - ray.origin.component(axis)) / d;
        t_delta[axis] = res / d.abs();
    }

    let mut spans = Vec::new();
    let mut t_enter = t0;
    loop {
        // smallest crossing parameter decides the axis to advance
        let axis = (0..3).min_by(|&a, &b| t_max[a].partial_cmp(&t_max[b]).unwrap()).unwrap();
        let t_next = t_max[axis];
        if t_next >= t1 {
            spans.push(CellSpan { cell: as_usize(cell), t_enter, t_exit: t1 });
            break;
        }
        spans.push(CellSpan { cell: as_usize(cell), t_enter, t_exit: t_next });
        cell[axis] += step[axis];
        if cell[axis] < 0 || cell[axis] >= config.dims[axis] as i64 {
            break;
        }
        t_max[axis] += t_delta[axis];
        t_enter = t_next;
    }
    spans
}

fn as_usize(cell: [i64; 3]) -> [usize; 3] {
    [cell[0] as usize, cell[1] as usize, cell[2] as usize]
}
