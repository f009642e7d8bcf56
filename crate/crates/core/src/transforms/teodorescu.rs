//! Teodorescu transform `T[g](x) = −∫_Ω K(x−ξ) g(ξ) dm(ξ)`.

use std::f64::consts::PI;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::kernel_unchecked;
use super::panel::triangle_inv_r_and_solid_angle;
use crate::geometry::{tet_volume, TetrahedralMesh};
use crate::operators::{QuaternionField, SharedField};
use crate::quaternion::{ComplexQuaternion, RealQuaternion};
use crate::structural::StructuralSet;
use crate::{vec3, Error, Point, Result};

/// Treatment of the cell containing the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularTreatment {
    /// For interior and near-exterior points write `T[g](x) = −∫K(x−ξ)(g(ξ) − g(x)) + T[1](x) g(x)`
    /// and evaluate `T[1]` in closed form over the boundary faces. The
    /// remaining integrand is bounded, and `ψD T[g] = g` holds up to the
    /// quadrature error of `T[1]` times `∇g`.
    Subtraction,
    /// Cells whose bounding ball (centred at the centroid) contains `x` are
    /// split 8-way once and the sub-cell containing `x` is dropped.
    SubdivideDrop,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TeodorescuOptions {
    pub treatment: SingularTreatment,
    /// Extra 8-way refinements of cells touching the boundary.
    pub boundary_refinement: u32,
    /// Largest admissible number of volume quadrature nodes.
    pub budget: usize,
}

impl Default for TeodorescuOptions {
    fn default() -> Self {
        Self {
            treatment: SingularTreatment::Subtraction,
            boundary_refinement: 1,
            budget: 4_000_000,
        }
    }
}

/// Split a tetrahedron into eight: four corner cells and four around the
/// `m02–m13` diagonal of the inner octahedron.
pub fn split_tet(p: [Point; 4]) -> [[Point; 4]; 8] {
    let m = |a: usize, b: usize| vec3::lerp(p[a], p[b], 0.5);
    let (m01, m02, m03, m12, m13, m23) = (m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3));
    [
        [p[0], m01, m02, m03],
        [m01, p[1], m12, m13],
        [m02, m12, p[2], m23],
        [m03, m13, m23, p[3]],
        [m02, m13, m01, m12],
        [m02, m13, m12, m23],
        [m02, m13, m23, m03],
        [m02, m13, m03, m01],
    ]
}

fn centroid(p: &[Point; 4]) -> Point {
    std::array::from_fn(|k| (p[0][k] + p[1][k] + p[2][k] + p[3][k]) / 4.0)
}

fn contains(p: &[Point; 4], x: Point) -> bool {
    let v = tet_volume(p[0], p[1], p[2], p[3]);
    let s = v.signum();
    let tol = -1e-14 * v.abs();
    [
        tet_volume(x, p[1], p[2], p[3]),
        tet_volume(p[0], x, p[2], p[3]),
        tet_volume(p[0], p[1], x, p[3]),
        tet_volume(p[0], p[1], p[2], x),
    ]
    .iter()
    .all(|&w| w * s >= tol)
}

/// Centroid quadrature nodes of a tetrahedral mesh, with boundary-adjacent
/// cells refined.
#[derive(Clone, Debug)]
pub struct VolumeQuadrature {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Nodes belonging to each mesh cell.
    pub cell_ranges: Vec<Range<usize>>,
}

impl VolumeQuadrature {
    pub fn new(mesh: &TetrahedralMesh, boundary_refinement: u32) -> Self {
        let adjacent = mesh.boundary_adjacent_cells();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut cell_ranges = Vec::with_capacity(mesh.num_cells());
        for c in 0..mesh.num_cells() {
            let start = nodes.len();
            let mut cells = vec![mesh.corners(c)];
            if adjacent[c] {
                for _ in 0..boundary_refinement {
                    cells = cells.iter().flat_map(|p| split_tet(*p)).collect();
                }
            }
            for p in &cells {
                nodes.push(centroid(p));
                weights.push(tet_volume(p[0], p[1], p[2], p[3]).abs());
            }
            cell_ranges.push(start..nodes.len());
        }
        Self {
            nodes,
            weights,
            cell_ranges,
        }
    }

    /// Node count the given refinement would produce, without building.
    pub fn count(mesh: &TetrahedralMesh, boundary_refinement: u32) -> usize {
        let adjacent = mesh.boundary_adjacent_cells().iter().filter(|&&a| a).count();
        mesh.num_cells() - adjacent + adjacent * 8usize.pow(boundary_refinement)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The Teodorescu transform of a fixed density `g` over a fixed mesh, ready
/// for repeated evaluation. Implements [`QuaternionField`] so that it can be
/// probed and differentiated like any other field.
pub struct Teodorescu {
    psi: StructuralSet,
    g: SharedField,
    quad: VolumeQuadrature,
    g_nodes: Vec<ComplexQuaternion>,
    cells: Vec<[Point; 4]>,
    cell_radius: Vec<f64>,
    faces: Vec<([Point; 3], Point)>,
    face_diameter: f64,
    options: TeodorescuOptions,
}

impl std::fmt::Debug for Teodorescu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Teodorescu")
            .field("nodes", &self.quad.len())
            .field("options", &self.options)
            .finish()
    }
}

impl Teodorescu {
    pub fn new(mesh: &TetrahedralMesh, g: SharedField, psi: StructuralSet, options: TeodorescuOptions) -> Result<Self> {
        let required = VolumeQuadrature::count(mesh, options.boundary_refinement);
        if required > options.budget {
            return Err(Error::QuadratureBudgetExceeded {
                required,
                budget: options.budget,
            });
        }
        let quad = VolumeQuadrature::new(mesh, options.boundary_refinement);
        let g_nodes = quad.nodes.par_iter().map(|&p| g.eval(p)).collect();
        let cells: Vec<[Point; 4]> = (0..mesh.num_cells()).map(|c| mesh.corners(c)).collect();
        let cell_radius = cells
            .iter()
            .zip(mesh.centroids())
            .map(|(p, &c)| p.iter().map(|&v| vec3::dist(v, c)).fold(0.0, f64::max))
            .collect();
        let faces = mesh
            .boundary_faces()
            .into_iter()
            .map(|f| {
                let corners = f.map(|v| mesh.vertices()[v]);
                let n = vec3::normalize(vec3::cross(
                    vec3::sub(corners[1], corners[0]),
                    vec3::sub(corners[2], corners[0]),
                ));
                (corners, n)
            })
            .collect::<Vec<_>>();
        let face_diameter = faces
            .iter()
            .map(|(c, _)| {
                vec3::dist(c[0], c[1])
                    .max(vec3::dist(c[1], c[2]))
                    .max(vec3::dist(c[2], c[0]))
            })
            .fold(0.0, f64::max);
        Ok(Self {
            psi,
            g,
            quad,
            g_nodes,
            cells,
            cell_radius,
            faces,
            face_diameter,
            options,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.quad.len()
    }

    pub fn options(&self) -> TeodorescuOptions {
        self.options
    }

    /// `(T[1](x), winding number of ∂Ω about x)`, both in closed form.
    pub fn unit_potential(&self, x: Point) -> (RealQuaternion, f64) {
        let mut v = [0.0; 3];
        let mut omega = 0.0;
        for (corners, n) in &self.faces {
            let (i, o) = triangle_inv_r_and_solid_angle(x, *corners);
            v = vec3::add(v, vec3::scale(*n, i));
            omega += o;
        }
        (self.psi.embed(vec3::scale(v, -1.0 / (4.0 * PI))), omega / (4.0 * PI))
    }

    fn plain_sum(&self, x: Point, skip_cell: Option<usize>) -> ComplexQuaternion {
        let mut acc = ComplexQuaternion::ZERO;
        for (c, range) in self.quad.cell_ranges.iter().enumerate() {
            if Some(c) == skip_cell {
                continue;
            }
            for i in range.clone() {
                let d = vec3::sub(x, self.quad.nodes[i]);
                let r2 = vec3::dot(d, d);
                if r2 == 0.0 {
                    continue;
                }
                acc += kernel_unchecked(&self.psi, d, r2) * self.g_nodes[i] * self.quad.weights[i];
            }
        }
        -acc
    }

    /// Within this many boundary-face diameters outside Ω the subtracted
    /// form is still used, so that `T[g]` is evaluated consistently on both
    /// sides of Γ.
    const EXTERIOR_SUBTRACTION_FACTOR: f64 = 3.0;

    fn near_boundary(&self, x: Point) -> bool {
        let r = Self::EXTERIOR_SUBTRACTION_FACTOR * self.face_diameter;
        self.faces
            .iter()
            .any(|(c, _)| c.iter().any(|&v| vec3::dist2(v, x) < r * r))
    }

    fn eval_subtraction(&self, x: Point) -> ComplexQuaternion {
        let (t1, winding) = self.unit_potential(x);
        if winding <= 0.5 && !self.near_boundary(x) {
            return self.plain_sum(x, None);
        }
        let gx = self.g.eval(x);
        if !gx.to_reals().iter().all(|v| v.is_finite()) {
            return self.plain_sum(x, None);
        }
        let mut acc = ComplexQuaternion::ZERO;
        for (i, &p) in self.quad.nodes.iter().enumerate() {
            let d = vec3::sub(x, p);
            let r2 = vec3::dot(d, d);
            if r2 == 0.0 {
                continue;
            }
            acc += kernel_unchecked(&self.psi, d, r2) * (self.g_nodes[i] - gx) * self.quad.weights[i];
        }
        t1 * gx - acc
    }

    fn eval_subdivide_drop(&self, x: Point) -> ComplexQuaternion {
        let mut acc = ComplexQuaternion::ZERO;
        for (c, range) in self.quad.cell_ranges.iter().enumerate() {
            let ctr = centroid(&self.cells[c]);
            if vec3::dist(x, ctr) <= self.cell_radius[c] {
                for sub in split_tet(self.cells[c]) {
                    if contains(&sub, x) {
                        continue;
                    }
                    let p = centroid(&sub);
                    let d = vec3::sub(x, p);
                    let r2 = vec3::dot(d, d);
                    if r2 == 0.0 {
                        continue;
                    }
                    let w = tet_volume(sub[0], sub[1], sub[2], sub[3]).abs();
                    acc += kernel_unchecked(&self.psi, d, r2) * self.g.eval(p) * w;
                }
            } else {
                for i in range.clone() {
                    let d = vec3::sub(x, self.quad.nodes[i]);
                    let r2 = vec3::dot(d, d);
                    acc += kernel_unchecked(&self.psi, d, r2) * self.g_nodes[i] * self.quad.weights[i];
                }
            }
        }
        -acc
    }

    /// `T[g](x)`, defined for every `x ∈ ℝ³`.
    pub fn eval_at(&self, x: Point) -> ComplexQuaternion {
        match self.options.treatment {
            SingularTreatment::Subtraction => self.eval_subtraction(x),
            SingularTreatment::SubdivideDrop => self.eval_subdivide_drop(x),
        }
    }
}

impl QuaternionField for Teodorescu {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        self.eval_at(x)
    }
}

/// One-shot `T[g](x)` with default options. Builds the quadrature on every
/// call; use [`Teodorescu`] for repeated evaluation.
pub fn teodorescu(mesh: &TetrahedralMesh, g: SharedField, psi: &StructuralSet, x: Point) -> Result<ComplexQuaternion> {
    Ok(Teodorescu::new(mesh, g, *psi, TeodorescuOptions::default())?.eval_at(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_sphere;
    use crate::operators::ConstantField;
    use crate::structural::make_psi_theta;
    use std::sync::Arc;

    #[test]
    fn split_preserves_volume_and_covers() {
        let p = [[0.0, 0.0, 0.0], [1.0, 0.1, 0.0], [0.2, 1.0, 0.1], [0.1, 0.3, 1.2]];
        let v = tet_volume(p[0], p[1], p[2], p[3]);
        let subs = split_tet(p);
        let total: f64 = subs.iter().map(|s| tet_volume(s[0], s[1], s[2], s[3]).abs()).sum();
        assert!((total - v).abs() < 1e-14);
        for s in &subs {
            assert!((tet_volume(s[0], s[1], s[2], s[3]).abs() - v / 8.0).abs() < 1e-14);
        }
        let x = [0.3, 0.3, 0.3];
        assert!(contains(&p, x));
        assert_eq!(subs.iter().filter(|s| contains(s, x)).count(), 1);
    }

    #[test]
    fn zero_density() {
        let (_, m) = make_sphere([0.0; 3], 1.0, 1).unwrap();
        let psi = make_psi_theta(0.0);
        let t = teodorescu(&m, Arc::new(ConstantField(ComplexQuaternion::ZERO)), &psi, [0.1, 0.0, 0.0]).unwrap();
        assert_eq!(t, ComplexQuaternion::ZERO);
    }

    #[test]
    fn unit_density_matches_closed_form() {
        // For the unit ball, ∫_B (x−ξ)/|x−ξ|³ dξ = (4π/3) x inside and
        // (4π/3) x/|x|³ outside, so T[1](x) = −(x)_ψ/3 inside.
        let (_, m) = make_sphere([0.0; 3], 1.0, 3).unwrap();
        let psi = make_psi_theta(0.4);
        let t = Teodorescu::new(&m, Arc::new(ConstantField(ComplexQuaternion::ONE)), psi, TeodorescuOptions::default()).unwrap();
        let x = [0.2, -0.1, 0.3];
        let exact = (psi.embed(x) * (-1.0 / 3.0)).complexify();
        assert!(t.eval_at(x).max_abs_diff(exact) < 5e-3);
        let y = [1.5, 0.5, 0.0];
        let r3 = vec3::norm(y).powi(3);
        let exact_out = (psi.embed(vec3::scale(y, -1.0 / (3.0 * r3)))).complexify();
        assert!(t.eval_at(y).max_abs_diff(exact_out) < 5e-3);
        let drop = Teodorescu::new(
            &m,
            Arc::new(ConstantField(ComplexQuaternion::ONE)),
            psi,
            TeodorescuOptions {
                treatment: SingularTreatment::SubdivideDrop,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(drop.eval_at(x).max_abs_diff(exact) < 2e-2);
    }

    #[test]
    fn budget_is_enforced() {
        let (_, m) = make_sphere([0.0; 3], 1.0, 1).unwrap();
        let r = Teodorescu::new(
            &m,
            Arc::new(ConstantField(ComplexQuaternion::ONE)),
            make_psi_theta(0.0),
            TeodorescuOptions {
                budget: 10,
                ..Default::default()
            },
        );
        assert!(matches!(r, Err(Error::QuadratureBudgetExceeded { .. })));
    }
}
