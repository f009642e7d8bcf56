//! Closed triangulated surfaces, tetrahedral meshes, mesh generation and
//! file I/O.

mod generate;
mod io;
mod spatial;

pub use generate::{icosphere, make_ellipsoid, make_jittered_sphere, make_sphere};
pub use io::{load_off, load_tet, parse_off, parse_tet, save_off, save_tet, to_off_string, to_tet_string};
pub use spatial::closest_point_on_triangle;

use std::collections::HashMap;

use spatial::SurfaceIndex;

use crate::{vec3, Error, Point, Result};

/// Signed volume of the tetrahedron `(a, b, c, d)`.
pub fn tet_volume(a: Point, b: Point, c: Point, d: Point) -> f64 {
    vec3::dot(vec3::sub(b, a), vec3::cross(vec3::sub(c, a), vec3::sub(d, a))) / 6.0
}

/// Closed, consistently and outward oriented triangle mesh.
#[derive(Clone, Debug)]
pub struct TriangulatedSurface {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Point>,
    areas: Vec<f64>,
    centroids: Vec<Point>,
    diameters: Vec<f64>,
    h: f64,
    index: SurfaceIndex,
}

impl TriangulatedSurface {
    /// Validate and build. Fails with `DegenerateMesh` on bad indices or
    /// zero-area triangles and with `Orientation` when the mesh is open,
    /// inconsistently oriented or encloses negative volume.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::DegenerateMesh("surface has no triangles".into()));
        }
        let n = vertices.len();
        if let Some((t, _)) = triangles
            .iter()
            .enumerate()
            .find(|(_, t)| t.iter().any(|&v| v >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        {
            return Err(Error::DegenerateMesh(format!("triangle {t} has invalid vertex indices")));
        }

        let mut edges: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * triangles.len());
        for t in &triangles {
            for e in 0..3 {
                *edges.entry((t[e], t[(e + 1) % 3])).or_default() += 1;
            }
        }
        for (&(a, b), &count) in &edges {
            if count > 1 {
                return Err(Error::Orientation(format!(
                    "edge ({a}, {b}) is traversed {count} times in the same direction"
                )));
            }
            if !edges.contains_key(&(b, a)) {
                return Err(Error::Orientation(format!(
                    "edge ({a}, {b}) has no opposite partner: the surface is not closed"
                )));
            }
        }

        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        let mut diameters = Vec::with_capacity(triangles.len());
        for (i, t) in triangles.iter().enumerate() {
            let [a, b, c] = t.map(|v| vertices[v]);
            let cr = vec3::cross(vec3::sub(b, a), vec3::sub(c, a));
            let len = vec3::norm(cr);
            let diam = vec3::dist(a, b).max(vec3::dist(b, c)).max(vec3::dist(a, c));
            if !(len > 1e-14 * diam * diam) {
                return Err(Error::DegenerateMesh(format!("triangle {i} has zero area")));
            }
            normals.push(vec3::scale(cr, 1.0 / len));
            areas.push(0.5 * len);
            centroids.push(vec3::scale(vec3::add(vec3::add(a, b), c), 1.0 / 3.0));
            diameters.push(diam);
        }
        let h = diameters.iter().cloned().fold(0.0, f64::max);
        let index = SurfaceIndex::build(&vertices, &triangles, &centroids);
        let s = Self {
            vertices,
            triangles,
            normals,
            areas,
            centroids,
            diameters,
            h,
            index,
        };
        let vol = s.signed_volume();
        if !(vol > 0.0) {
            return Err(Error::Orientation(format!(
                "enclosed signed volume {vol:e} is not positive: normals point inward"
            )));
        }
        Ok(s)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    /// Triangle centroids; these are the quadrature nodes.
    pub fn centroids(&self) -> &[Point] {
        &self.centroids
    }

    /// Per-triangle diameter (longest edge).
    pub fn diameters(&self) -> &[f64] {
        &self.diameters
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Mesh size: the largest triangle diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|v| self.vertices[v]);
                vec3::dot(a, vec3::cross(b, c)) / 6.0
            })
            .sum()
    }

    /// `Σ area · ν`; zero for a closed surface.
    pub fn area_weighted_normal_sum(&self) -> Point {
        let mut s = [0.0; 3];
        for (n, a) in self.normals.iter().zip(&self.areas) {
            for k in 0..3 {
                s[k] += n[k] * a;
            }
        }
        s
    }

    /// Centroid of the enclosed solid.
    pub fn volume_centroid(&self) -> Point {
        let mut acc = [0.0; 3];
        let mut vol = 0.0;
        for t in &self.triangles {
            let [a, b, c] = t.map(|v| self.vertices[v]);
            let v = vec3::dot(a, vec3::cross(b, c)) / 6.0;
            vol += v;
            for k in 0..3 {
                acc[k] += v * (a[k] + b[k] + c[k]) / 4.0;
            }
        }
        vec3::scale(acc, 1.0 / vol)
    }

    /// Largest vertex distance from `center`.
    pub fn circumradius(&self, center: Point) -> f64 {
        self.vertices
            .iter()
            .map(|&v| vec3::dist(v, center))
            .fold(0.0, f64::max)
    }

    /// Largest distance between two vertices, estimated as twice the
    /// circumradius about the volume centroid bounded by the box diagonal.
    pub fn diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        vec3::dist(lo, hi).min(2.0 * self.circumradius(self.volume_centroid()))
    }

    /// Distance from the volume centroid to the surface; the exact inradius
    /// for convex domains centred on their centroid, a lower bound for the
    /// largest inscribed ball in general.
    pub fn inradius_estimate(&self) -> f64 {
        self.closest_point(self.volume_centroid()).1
    }

    /// `(closest point on Γ, distance)`.
    pub fn closest_point(&self, x: Point) -> (Point, f64) {
        let (p, d, _) = self.index.closest_point(x);
        (p, d)
    }

    /// Like [`closest_point`](Self::closest_point) but also returns the
    /// triangle containing the closest point.
    pub fn closest_point_with_triangle(&self, x: Point) -> (Point, f64, usize) {
        self.index.closest_point(x)
    }

    pub fn distance(&self, x: Point) -> f64 {
        self.index.closest_point(x).1
    }

    /// The `k` quadrature nodes nearest to `x`, closest first.
    pub fn nearest_nodes(&self, x: Point, k: usize) -> Vec<usize> {
        self.index.nearest_nodes(x, k)
    }

    /// Triangles whose bounding box intersects the cube of half-width `r`
    /// around `x`.
    pub fn triangles_near(&self, x: Point, r: f64) -> Vec<usize> {
        self.index.triangles_near(x, r)
    }

    /// Solid-angle winding number of the surface about `x`: 1 inside, 0
    /// outside.
    pub fn winding_number(&self, x: Point) -> f64 {
        let mut omega = 0.0;
        for t in 0..self.num_triangles() {
            let [a, b, c] = self.corners(t);
            omega += crate::transforms::panel::solid_angle(x, a, b, c);
        }
        omega / (4.0 * std::f64::consts::PI)
    }

    /// Whether `x` lies in the open domain bounded by the surface.
    pub fn contains(&self, x: Point) -> bool {
        self.winding_number(x) > 0.5
    }

    /// Same surface with every vertex mapped by `f`, revalidated.
    pub fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&v| f(v)).collect(), self.triangles.clone())
    }
}

/// Tetrahedral mesh with positively oriented cells.
#[derive(Clone, Debug)]
pub struct TetrahedralMesh {
    vertices: Vec<Point>,
    tets: Vec<[usize; 4]>,
    volumes: Vec<f64>,
    centroids: Vec<Point>,
}

impl TetrahedralMesh {
    /// Validate and build. Negative cells are an `Orientation` error; flat
    /// cells or bad indices are `DegenerateMesh`.
    pub fn new(vertices: Vec<Point>, tets: Vec<[usize; 4]>) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::DegenerateMesh("tetrahedral mesh has no cells".into()));
        }
        let n = vertices.len();
        let mut volumes = Vec::with_capacity(tets.len());
        let mut centroids = Vec::with_capacity(tets.len());
        for (i, t) in tets.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::DegenerateMesh(format!("cell {i} has an out-of-range vertex index")));
            }
            let [a, b, c, d] = t.map(|v| vertices[v]);
            let v = tet_volume(a, b, c, d);
            let scale = vec3::dist(a, b).max(vec3::dist(a, c)).max(vec3::dist(a, d));
            if v.abs() <= 1e-14 * scale.powi(3) {
                return Err(Error::DegenerateMesh(format!("cell {i} has zero volume")));
            }
            if v < 0.0 {
                return Err(Error::Orientation(format!("cell {i} is negatively oriented")));
            }
            volumes.push(v);
            centroids.push(std::array::from_fn(|k| (a[k] + b[k] + c[k] + d[k]) / 4.0));
        }
        Ok(Self {
            vertices,
            tets,
            volumes,
            centroids,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn centroids(&self) -> &[Point] {
        &self.centroids
    }

    pub fn num_cells(&self) -> usize {
        self.tets.len()
    }

    pub fn corners(&self, c: usize) -> [Point; 4] {
        self.tets[c].map(|v| self.vertices[v])
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes.iter().sum()
    }

    /// Faces belonging to exactly one cell, oriented with outward normals.
    pub fn boundary_faces(&self) -> Vec<[usize; 3]> {
        const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
        let mut seen: HashMap<[usize; 3], ([usize; 3], usize)> = HashMap::new();
        for t in &self.tets {
            for f in FACES {
                let face = f.map(|k| t[k]);
                let mut key = face;
                key.sort_unstable();
                seen.entry(key).or_insert((face, 0)).1 += 1;
            }
        }
        let mut out: Vec<[usize; 3]> = seen
            .into_values()
            .filter(|(_, count)| *count == 1)
            .map(|(face, _)| face)
            .collect();
        out.sort_unstable();
        out
    }

    /// Indices of cells with at least one vertex on the boundary.
    pub fn boundary_adjacent_cells(&self) -> Vec<bool> {
        let mut on_boundary = vec![false; self.vertices.len()];
        for f in self.boundary_faces() {
            for v in f {
                on_boundary[v] = true;
            }
        }
        self.tets
            .iter()
            .map(|t| t.iter().any(|&v| on_boundary[v]))
            .collect()
    }

    /// Largest edge length over all cells.
    pub fn max_edge(&self) -> f64 {
        let mut h: f64 = 0.0;
        for c in 0..self.num_cells() {
            let p = self.corners(c);
            for i in 0..4 {
                for j in i + 1..4 {
                    h = h.max(vec3::dist(p[i], p[j]));
                }
            }
        }
        h
    }

    /// Check that the boundary of this mesh reproduces `surface`: the same
    /// number of faces, matching total area, and every boundary face
    /// centroid within `tol · h` of the surface.
    pub fn check_matches_surface(&self, surface: &TriangulatedSurface, tol: f64) -> Result<()> {
        let faces = self.boundary_faces();
        if faces.len() != surface.num_triangles() {
            return Err(Error::DegenerateMesh(format!(
                "tetrahedral boundary has {} faces, surface has {} triangles",
                faces.len(),
                surface.num_triangles()
            )));
        }
        let mut area = 0.0;
        for f in &faces {
            let [a, b, c] = f.map(|v| self.vertices[v]);
            area += 0.5 * vec3::norm(vec3::cross(vec3::sub(b, a), vec3::sub(c, a)));
            let centroid = vec3::scale(vec3::add(vec3::add(a, b), c), 1.0 / 3.0);
            let d = surface.distance(centroid);
            if d > tol * surface.h() {
                return Err(Error::DegenerateMesh(format!(
                    "boundary face centroid {centroid:?} is {d:e} from the surface"
                )));
            }
        }
        let rel = (area - surface.total_area()).abs() / surface.total_area();
        if rel > tol {
            return Err(Error::DegenerateMesh(format!(
                "boundary area differs from surface area by {rel:e} (relative)"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_surface() -> (Vec<Point>, Vec<[usize; 3]>) {
        let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let t = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
        (v, t)
    }

    #[test]
    fn tetrahedron_surface() {
        let (v, t) = tetra_surface();
        let s = TriangulatedSurface::new(v, t).unwrap();
        assert!((s.signed_volume() - 1.0 / 6.0).abs() < 1e-15);
        let n = s.area_weighted_normal_sum();
        assert!(vec3::norm(n) < 1e-15);
        assert!(s.contains([0.1, 0.1, 0.1]));
        assert!(!s.contains([1.0, 1.0, 1.0]));
    }

    #[test]
    fn open_and_inverted_surfaces_rejected() {
        let (v, mut t) = tetra_surface();
        let inverted: Vec<_> = t.iter().map(|f| [f[0], f[2], f[1]]).collect();
        assert!(matches!(
            TriangulatedSurface::new(v.clone(), inverted),
            Err(Error::Orientation(_))
        ));
        t.pop();
        assert!(matches!(TriangulatedSurface::new(v, t), Err(Error::Orientation(_))));
    }

    #[test]
    fn single_tet_mesh() {
        let (v, _) = tetra_surface();
        let m = TetrahedralMesh::new(v.clone(), vec![[0, 1, 2, 3]]).unwrap();
        assert_eq!(m.boundary_faces().len(), 4);
        let bad = TetrahedralMesh::new(v, vec![[0, 2, 1, 3]]);
        assert!(matches!(bad, Err(Error::Orientation(_))));
        // Boundary faces come out with outward orientation.
        let faces = m.boundary_faces();
        let s = TriangulatedSurface::new(m.vertices().to_vec(), faces).unwrap();
        assert!(s.signed_volume() > 0.0);
    }
}
