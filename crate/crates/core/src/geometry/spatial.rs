//! Spatial index for closest-point and nearest-node queries.

use rstar::primitives::GeomWithData;
use rstar::{PointDistance, RTree, RTreeObject, AABB};

use crate::{vec3, Point};

/// Closest point to `p` on the triangle `(a, b, c)`.
pub fn closest_point_on_triangle(p: Point, a: Point, b: Point, c: Point) -> Point {
    let ab = vec3::sub(b, a);
    let ac = vec3::sub(c, a);
    let ap = vec3::sub(p, a);
    let d1 = vec3::dot(ab, ap);
    let d2 = vec3::dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = vec3::sub(p, b);
    let d3 = vec3::dot(ab, bp);
    let d4 = vec3::dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return vec3::add(a, vec3::scale(ab, v));
    }
    let cp = vec3::sub(p, c);
    let d5 = vec3::dot(ab, cp);
    let d6 = vec3::dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return vec3::add(a, vec3::scale(ac, w));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return vec3::add(b, vec3::scale(vec3::sub(c, b), w));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    vec3::add(a, vec3::add(vec3::scale(ab, v), vec3::scale(ac, w)))
}

#[derive(Clone, Debug)]
struct IndexedTriangle {
    index: usize,
    corners: [Point; 3],
}

impl RTreeObject for IndexedTriangle {
    type Envelope = AABB<Point>;

    fn envelope(&self) -> Self::Envelope {
        let [a, b, c] = self.corners;
        let lo = std::array::from_fn(|k| a[k].min(b[k]).min(c[k]));
        let hi = std::array::from_fn(|k| a[k].max(b[k]).max(c[k]));
        AABB::from_corners(lo, hi)
    }
}

impl PointDistance for IndexedTriangle {
    fn distance_2(&self, p: &Point) -> f64 {
        let [a, b, c] = self.corners;
        vec3::dist2(*p, closest_point_on_triangle(*p, a, b, c))
    }
}

type Node = GeomWithData<Point, usize>;

/// R-trees over triangles and over quadrature nodes (triangle centroids).
#[derive(Clone)]
pub struct SurfaceIndex {
    triangles: RTree<IndexedTriangle>,
    nodes: RTree<Node>,
}

impl std::fmt::Debug for SurfaceIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceIndex")
            .field("triangles", &self.triangles.size())
            .field("nodes", &self.nodes.size())
            .finish()
    }
}

impl SurfaceIndex {
    pub fn build(vertices: &[Point], triangles: &[[usize; 3]], centroids: &[Point]) -> Self {
        let tris = triangles
            .iter()
            .enumerate()
            .map(|(index, t)| IndexedTriangle {
                index,
                corners: t.map(|v| vertices[v]),
            })
            .collect();
        let nodes = centroids
            .iter()
            .enumerate()
            .map(|(i, &c)| Node::new(c, i))
            .collect();
        Self {
            triangles: RTree::bulk_load(tris),
            nodes: RTree::bulk_load(nodes),
        }
    }

    /// `(closest point, distance, triangle index)`.
    pub fn closest_point(&self, x: Point) -> (Point, f64, usize) {
        let t = self
            .triangles
            .nearest_neighbor(&x)
            .expect("surface index is never empty");
        let [a, b, c] = t.corners;
        let p = closest_point_on_triangle(x, a, b, c);
        (p, vec3::dist(x, p), t.index)
    }

    /// Indices of the `k` nodes nearest to `x`, closest first.
    pub fn nearest_nodes(&self, x: Point, k: usize) -> Vec<usize> {
        self.nodes
            .nearest_neighbor_iter(&x)
            .take(k)
            .map(|n| n.data)
            .collect()
    }

    /// Indices of triangles whose bounding boxes come within `r` of `x`.
    pub fn triangles_near(&self, x: Point, r: f64) -> Vec<usize> {
        let env = AABB::from_corners(
            [x[0] - r, x[1] - r, x[2] - r],
            [x[0] + r, x[1] + r, x[2] + r],
        );
        self.triangles
            .locate_in_envelope_intersecting(&env)
            .map(|t| t.index)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_regions() {
        let a = [0.0, 0.0, 0.0];
        let b = [1.0, 0.0, 0.0];
        let c = [0.0, 1.0, 0.0];
        assert!(vec3::dist(closest_point_on_triangle([0.2, 0.2, 1.0], a, b, c), [0.2, 0.2, 0.0]) < 1e-15);
        assert_eq!(closest_point_on_triangle([-1.0, -1.0, 0.0], a, b, c), a);
        assert_eq!(closest_point_on_triangle([2.0, -0.5, 0.0], a, b, c), b);
        let p = closest_point_on_triangle([1.0, 1.0, 0.0], a, b, c);
        assert!(vec3::dist(p, [0.5, 0.5, 0.0]) < 1e-15);
        let p = closest_point_on_triangle([0.5, -1.0, 3.0], a, b, c);
        assert!(vec3::dist(p, [0.5, 0.0, 0.0]) < 1e-15);
    }
}
