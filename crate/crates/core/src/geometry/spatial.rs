//! 3D k-d tree for nearest-neighbor queries.
//!
//! Ties on distance resolve to the lowest original point index, matching the
//! brute-force scan the metrics tests compare against.

use super::Vec3;

#[derive(Debug, Clone)]
struct Node {
    point: Vec3,
    index: usize,
    axis: usize,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

/// Static k-d tree over a point list.
#[derive(Debug, Clone)]
pub struct KdTree {
    root: Option<Box<Node>>,
}

impl KdTree {
    pub fn build(points: &[Vec3]) -> KdTree {
        let mut items: Vec<(Vec3, usize)> = points.iter().copied().zip(0..).collect();
        KdTree { root: build_node(&mut items, 0) }
    }

    /// Index of and distance to the nearest point; `None` on an empty tree.
    pub fn nearest(&self, query: Vec3) -> Option<(usize, f64)> {
        let root = self.root.as_deref()?;
        let mut best = (root.index, query.distance(root.point));
        search(root, query, &mut best);
        Some(best)
    }
}

fn build_node(items: &mut [(Vec3, usize)], depth: usize) -> Option<Box<Node>> {
    if items.is_empty() {
        return None;
    }
    let axis = depth % 3;
    items.sort_by(|a, b| {
        a.0.component(axis)
            .partial_cmp(&b.0.component(axis))
            .unwrap()
            .then(a.1.cmp(&b.1))
    });
    let mid = items.len() / 2;
    let (point, index) = items[mid];
    let (left, rest) = items.split_at_mut(mid);
    let right = &mut rest[1..];
    Some(Box::new(Node {
        point,
        index,
        axis,
        left: build_node(left, depth + 1),
        right: build_node(right, depth + 1),
    }))
}

fn search(node: &Node, query: Vec3, best: &mut (usize, f64)) {
    let d = query.distance(node.point);
    if d < best.1 || (d == best.1 && node.index < best.0) {
        *best = (node.index, d);
    }
    let delta = query.component(node.axis) - node.point.component(node.axis);
    let (near, far) = if delta <= 0.0 {
        (&node.left, &node.right)
    } else {
        (&node.right, &node.left)
    };
    if let Some(n) = near {
        search(n, query, best);
    }
    if let Some(f) = far {
        // the splitting plane is only worth crossing if it can tie or beat
        if delta.abs() <= best.1 {
            search(f, query, best);
        }
    }
}

/// Brute-force nearest neighbor with the same tie-break rule.
pub fn nearest_brute_force(points: &[Vec3], query: Vec3) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &p) in points.iter().enumerate() {
        let d = query.distance(p);
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best
}
