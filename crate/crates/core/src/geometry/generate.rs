use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{tet_volume, TetrahedralMesh, TriangulatedSurface};
use crate::{vec3, Error, Point, Result};

/// Unit icosphere: the icosahedron with `level` rounds of midpoint
/// subdivision, vertices projected to the sphere. `20 · 4^level` triangles,
/// outward orientation.
pub fn icosphere(level: u32) -> (Vec<Point>, Vec<[usize; 3]>) {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point> = [
        [-1.0, p, 0.0],
        [1.0, p, 0.0],
        [-1.0, -p, 0.0],
        [1.0, -p, 0.0],
        [0.0, -1.0, p],
        [0.0, 1.0, p],
        [0.0, -1.0, -p],
        [0.0, 1.0, -p],
        [p, 0.0, -1.0],
        [p, 0.0, 1.0],
        [-p, 0.0, -1.0],
        [-p, 0.0, 1.0],
    ]
    .into_iter()
    .map(vec3::normalize)
    .collect();
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                vertices.push(vec3::normalize(vec3::lerp(vertices[a], vertices[b], 0.5)));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for &[a, b, c] in &triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        triangles = next;
    }
    (vertices, triangles)
}

/// Fill a domain that is star-shaped about `center` by radial extrusion of
/// its surface. The first `vertices.len()` mesh vertices are the surface
/// vertices in the same order.
fn extrude(vertices: &[Point], triangles: &[[usize; 3]], center: Point, layers: usize) -> Result<TetrahedralMesh> {
    let n = vertices.len();
    let mut pts = Vec::with_capacity(n * layers + 1);
    for l in 0..layers {
        let s = 1.0 - l as f64 / layers as f64;
        pts.extend(vertices.iter().map(|&v| vec3::add(center, vec3::scale(vec3::sub(v, center), s))));
    }
    let center_index = pts.len();
    pts.push(center);
    let at = |layer: usize, v: usize| layer * n + v;
    let mut tets = Vec::with_capacity(triangles.len() * (3 * (layers - 1) + 1));
    let mut push = |t: [usize; 4], pts: &[Point]| {
        let [a, b, c, d] = t.map(|i| pts[i]);
        if tet_volume(a, b, c, d) < 0.0 {
            tets.push([t[0], t[2], t[1], t[3]]);
        } else {
            tets.push(t);
        }
    };
    for tri in triangles {
        let mut s = *tri;
        s.sort_unstable();
        let [a, b, c] = s;
        for l in 0..layers - 1 {
            // Every quad face is cut along (outer of the smaller index,
            // inner of the larger), so neighbouring prisms conform.
            let (ao, bo, co) = (at(l, a), at(l, b), at(l, c));
            let (ai, bi, ci) = (at(l + 1, a), at(l + 1, b), at(l + 1, c));
            push([ao, bo, co, ci], &pts);
            push([ao, bo, bi, ci], &pts);
            push([ao, ai, bi, ci], &pts);
        }
        let l = layers - 1;
        push([at(l, a), at(l, b), at(l, c), center_index], &pts);
    }
    TetrahedralMesh::new(pts, tets)
}

fn build_star(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, center: Point, level: u32) -> Result<(TriangulatedSurface, TetrahedralMesh)> {
    let surface = TriangulatedSurface::new(vertices, triangles)?;
    let tets = extrude(surface.vertices(), surface.triangles(), center, level as usize + 1)?;
    Ok((surface, tets))
}

/// Icosphere of the given radius and subdivision level together with a
/// matching tetrahedral mesh of `level + 1` radial layers.
pub fn make_sphere(center: Point, radius: f64, level: u32) -> Result<(TriangulatedSurface, TetrahedralMesh)> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let (v, t) = icosphere(level);
    let v = v.into_iter().map(|p| vec3::add(center, vec3::scale(p, radius))).collect();
    build_star(v, t, center, level)
}

/// Origin-centred ellipsoid with the given semi-axes.
pub fn make_ellipsoid(axes: [f64; 3], level: u32) -> Result<(TriangulatedSurface, TetrahedralMesh)> {
    if axes.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(format!("semi-axes must be positive, got {axes:?}")));
    }
    let (v, t) = icosphere(level);
    let v = v.into_iter().map(|p| [p[0] * axes[0], p[1] * axes[1], p[2] * axes[2]]).collect();
    build_star(v, t, [0.0; 3], level)
}

/// Sphere whose vertices are moved radially by a seeded random factor in
/// `[1 - amplitude, 1 + amplitude]`, giving an irregular piecewise-flat
/// boundary. `amplitude` must lie in `[0, 0.5)`.
pub fn make_jittered_sphere(
    center: Point,
    radius: f64,
    level: u32,
    amplitude: f64,
    seed: u64,
) -> Result<(TriangulatedSurface, TetrahedralMesh)> {
    if !(0.0..0.5).contains(&amplitude) {
        return Err(Error::InvalidParameter(format!("jitter amplitude must be in [0, 0.5), got {amplitude}")));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (v, t) = icosphere(level);
    let v = v
        .into_iter()
        .map(|p| {
            let s = radius * (1.0 + amplitude * rng.gen_range(-1.0..=1.0));
            vec3::add(center, vec3::scale(p, s))
        })
        .collect();
    build_star(v, t, center, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn counts_and_convergence() {
        let mut prev_area_err = f64::INFINITY;
        let mut prev_vol_err = f64::INFINITY;
        for level in 0..=3 {
            let (s, m) = make_sphere([0.0; 3], 1.0, level).unwrap();
            assert_eq!(s.num_triangles(), 20 * 4usize.pow(level));
            let area_err = (s.total_area() - 4.0 * PI).abs() / (4.0 * PI);
            let vol_err = (s.signed_volume() - 4.0 * PI / 3.0).abs() / (4.0 * PI / 3.0);
            assert!((m.total_volume() - s.signed_volume()).abs() < 1e-12);
            assert!(area_err * 3.0 <= prev_area_err && vol_err * 3.0 <= prev_vol_err);
            prev_area_err = area_err;
            prev_vol_err = vol_err;
            m.check_matches_surface(&s, 1e-9).unwrap();
            if level == 0 {
                assert!(area_err < 0.25);
            }
            if level == 3 {
                assert!(area_err < 0.005 && vol_err < 0.01);
            }
        }
    }

    #[test]
    fn extrusion_is_conforming() {
        // In a conforming mesh every interior face is shared by exactly two
        // cells, so the boundary is exactly the surface.
        let (s, m) = make_sphere([0.0; 3], 1.0, 1).unwrap();
        assert_eq!(m.boundary_faces().len(), s.num_triangles());
        assert_eq!(&m.vertices()[..s.vertices().len()], s.vertices());
    }

    #[test]
    fn ellipsoid_volume() {
        let (s, m) = make_ellipsoid([1.0, 0.7, 0.5], 3).unwrap();
        let exact = 4.0 / 3.0 * PI * 0.35;
        assert!((s.signed_volume() - exact).abs() / exact < 0.01);
        assert!((m.total_volume() - s.signed_volume()).abs() < 1e-12);
        assert!(make_ellipsoid([1.0, 0.0, 1.0], 1).is_err());
    }

    #[test]
    fn jittered_sphere_is_valid_and_reproducible() {
        let (a, _) = make_jittered_sphere([0.0; 3], 1.0, 2, 0.2, 4).unwrap();
        let (b, _) = make_jittered_sphere([0.0; 3], 1.0, 2, 0.2, 4).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert!(a.signed_volume() > 0.0);
    }
}
