//! Extension of boundary data into the enclosed domain.
//!
//! At `x` the data are interpolated by a modified Shepard rule over the
//! surface nodes nearest to `x`, then blended towards the area mean of the
//! data as the distance from `x` to Γ approaches `ρ`. Interpolating at `x`
//! itself rather than at its closest point on Γ keeps the extension
//! continuous across the bisector planes of the mesh edges, where the
//! closest-point map of a polyhedron jumps. The result is Lipschitz with constant comparable to
//! that of the data plus `‖f‖∞/ρ`, reproduces the nodal values exactly, and
//! is defined on all of ℝ³; the Whitney field `f^w` is its restriction to
//! `Ω ∪ Γ`, extended by zero.

use std::sync::Arc;

use serde::Serialize;

use crate::geometry::TriangulatedSurface;
use crate::operators::QuaternionField;
use crate::quaternion::ComplexQuaternion;
use crate::transforms::BoundaryField;
use crate::{vec3, Error, Point, Result};

/// Profile `φ` of the blend, with `φ(0) = 1`, `φ(s) = 0` for `s ≥ 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CutoffProfile {
    /// `1 − 3s² + 2s³`, C¹.
    #[default]
    Cubic,
    /// `1 − 10s³ + 15s⁴ − 6s⁵`, C².
    Quintic,
    /// `(1 + cos πs) / 2`, C¹.
    Cosine,
}

impl CutoffProfile {
    pub fn value(self, s: f64) -> f64 {
        if s <= 0.0 {
            return 1.0;
        }
        if s >= 1.0 {
            return 0.0;
        }
        match self {
            CutoffProfile::Cubic => 1.0 - s * s * (3.0 - 2.0 * s),
            CutoffProfile::Quintic => 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s),
            CutoffProfile::Cosine => 0.5 * (1.0 + (std::f64::consts::PI * s).cos()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CutoffProfile::Cubic => "cubic",
            CutoffProfile::Quintic => "quintic",
            CutoffProfile::Cosine => "cosine",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cubic" => Ok(CutoffProfile::Cubic),
            "quintic" => Ok(CutoffProfile::Quintic),
            "cosine" => Ok(CutoffProfile::Cosine),
            other => Err(Error::InvalidParameter(format!("unknown cutoff profile `{other}`"))),
        }
    }
}

/// Parameters of the extension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtensionParams {
    /// Width of the layer along Γ over which the blend decays.
    pub rho: f64,
    pub cutoff: CutoffProfile,
    /// Central-difference step for `ψD f^w`.
    pub fd_step: f64,
    /// Number of surface nodes entering the Shepard blend.
    pub neighbors: usize,
}

impl ExtensionParams {
    /// `ρ = 0.4 · inradius`, `fd_step = min(1e-4 · diam, ρ/4)`, six
    /// neighbours.
    pub fn for_surface(surface: &TriangulatedSurface) -> Self {
        let rho = 0.4 * surface.inradius_estimate();
        Self {
            rho,
            cutoff: CutoffProfile::Cubic,
            fd_step: (1e-4 * surface.diameter()).min(rho / 4.0),
            neighbors: 6,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self.fd_step = self.fd_step.min(rho / 4.0);
        self
    }

    /// Check `0 < ρ < inradius/2`, `0 < fd_step ≤ ρ/4` and at least one
    /// neighbour.
    pub fn validate(&self, surface: &TriangulatedSurface) -> Result<()> {
        let inradius = surface.inradius_estimate();
        if !(self.rho > 0.0 && self.rho < inradius / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "rho = {} must lie in (0, {}) (half the inradius)",
                self.rho,
                inradius / 2.0
            )));
        }
        if !(self.fd_step > 0.0 && self.fd_step <= self.rho / 4.0) {
            return Err(Error::InvalidParameter(format!(
                "fd_step = {} must lie in (0, rho/4 = {}]",
                self.fd_step,
                self.rho / 4.0
            )));
        }
        if self.neighbors == 0 || self.neighbors >= surface.num_triangles() {
            return Err(Error::InvalidParameter(format!(
                "neighbors = {} must lie in [1, {})",
                self.neighbors,
                surface.num_triangles()
            )));
        }
        Ok(())
    }
}

/// The extension on all of ℝ³, before restriction to `Ω ∪ Γ`.
pub struct SmoothExtension {
    surface: Arc<TriangulatedSurface>,
    values: Vec<ComplexQuaternion>,
    mean: ComplexQuaternion,
    params: ExtensionParams,
}

impl SmoothExtension {
    pub fn new(surface: Arc<TriangulatedSurface>, f: &BoundaryField, params: ExtensionParams) -> Result<Self> {
        f.ensure_matches(&surface)?;
        params.validate(&surface)?;
        let area = surface.total_area();
        let mean = f
            .values
            .iter()
            .zip(surface.areas())
            .map(|(v, &a)| *v * a)
            .sum::<ComplexQuaternion>()
            / area;
        Ok(Self {
            values: f.values.clone(),
            surface,
            mean,
            params,
        })
    }

    pub fn params(&self) -> ExtensionParams {
        self.params
    }

    pub fn surface(&self) -> &Arc<TriangulatedSurface> {
        &self.surface
    }

    /// Area mean of the data, the value deep inside Ω.
    pub fn mean(&self) -> ComplexQuaternion {
        self.mean
    }

    /// Modified Shepard interpolant at `p`: weights
    /// `((R − d)₊ / (R d))²` with `R` the distance to the first node beyond
    /// the blend set. Exact at nodes.
    pub fn blend(&self, p: Point) -> ComplexQuaternion {
        let k = self.params.neighbors;
        let near = self.surface.nearest_nodes(p, k + 1);
        let centroids = self.surface.centroids();
        let dists: Vec<f64> = near.iter().map(|&n| vec3::dist(p, centroids[n])).collect();
        let tiny = 1e-12 * self.surface.h();
        if dists[0] <= tiny {
            return self.values[near[0]];
        }
        let r = dists[near.len() - 1];
        let mut acc = ComplexQuaternion::ZERO;
        let mut total = 0.0;
        for (&n, &d) in near.iter().zip(&dists).take(k) {
            let w = ((r - d).max(0.0) / (r * d)).powi(2);
            acc += self.values[n] * w;
            total += w;
        }
        if total > 0.0 {
            acc / total
        } else {
            // All blend nodes equidistant with the next one: plain average.
            near.iter().take(k).map(|&n| self.values[n]).sum::<ComplexQuaternion>() / k as f64
        }
    }
}

impl QuaternionField for SmoothExtension {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        let d = self.surface.distance(x);
        let phi = self.params.cutoff.value(d / self.params.rho);
        if phi == 0.0 {
            return self.mean;
        }
        self.blend(x) * phi + self.mean * (1.0 - phi)
    }
}

/// `f^w = χ_{Ω∪Γ} · E f`, zero outside the closed domain.
pub struct WhitneyField {
    inner: Arc<SmoothExtension>,
}

impl WhitneyField {
    pub fn from_smooth(inner: Arc<SmoothExtension>) -> Self {
        Self { inner }
    }

    pub fn smooth(&self) -> &Arc<SmoothExtension> {
        &self.inner
    }
}

impl QuaternionField for WhitneyField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        let s = &self.inner.surface;
        let (_, d) = s.closest_point(x);
        if d <= 1e-12 * s.h() || s.contains(x) {
            self.inner.eval(x)
        } else {
            ComplexQuaternion::ZERO
        }
    }
}

/// Build `f^w` from nodal data.
pub fn extend_boundary_field(
    surface: Arc<TriangulatedSurface>,
    f: &BoundaryField,
    params: ExtensionParams,
) -> Result<WhitneyField> {
    Ok(WhitneyField {
        inner: Arc::new(SmoothExtension::new(surface, f, params)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_sphere;
    use crate::operators::{ConstantField, FnField};
    use crate::quaternion::Complex;

    fn sphere(level: u32) -> Arc<TriangulatedSurface> {
        Arc::new(make_sphere([0.0; 3], 1.0, level).unwrap().0)
    }

    #[test]
    fn profiles_are_monotone_cutoffs() {
        for p in [CutoffProfile::Cubic, CutoffProfile::Quintic, CutoffProfile::Cosine] {
            assert_eq!(p.value(0.0), 1.0);
            assert_eq!(p.value(1.0), 0.0);
            let mut prev = 1.0;
            for k in 1..=100 {
                let v = p.value(k as f64 / 100.0);
                assert!(v <= prev + 1e-15);
                prev = v;
            }
            assert_eq!(CutoffProfile::parse(p.name()).unwrap(), p);
        }
    }

    #[test]
    fn constant_data_extends_to_constant() {
        let s = sphere(2);
        let c = ComplexQuaternion::from_vector([Complex::new(1.0, 0.5), Complex::new(0.0, 0.0), Complex::new(-2.0, 0.0)]);
        let f = BoundaryField::sample(&s, Arc::new(ConstantField(c)));
        let w = extend_boundary_field(s.clone(), &f, ExtensionParams::for_surface(&s)).unwrap();
        for x in [[0.0, 0.0, 0.0], [0.5, 0.2, -0.3], [0.0, 0.0, 0.97]] {
            assert!(w.eval(x).max_abs_diff(c) < 1e-14);
        }
        assert_eq!(w.eval([0.0, 1.5, 0.0]), ComplexQuaternion::ZERO);
    }

    #[test]
    fn nodal_values_are_reproduced() {
        let s = sphere(2);
        let g = Arc::new(FnField::new(|x: Point| ComplexQuaternion::from_scalar(Complex::new(x[0] + x[1] * x[2], 0.0))));
        let f = BoundaryField::sample(&s, g);
        let w = extend_boundary_field(s.clone(), &f, ExtensionParams::for_surface(&s)).unwrap();
        for n in (0..s.num_triangles()).step_by(17) {
            assert!(w.eval(s.centroids()[n]).max_abs_diff(f.values[n]) < 1e-14);
        }
    }

    #[test]
    fn odd_data_vanish_at_the_centre() {
        let s = sphere(2);
        let g = Arc::new(FnField::new(|x: Point| ComplexQuaternion::from_scalar(Complex::new(x[0], 0.0))));
        let f = BoundaryField::sample(&s, g);
        let w = extend_boundary_field(s.clone(), &f, ExtensionParams::for_surface(&s)).unwrap();
        assert!(w.eval([0.0; 3]).norm_c() < 1e-3);
    }

    #[test]
    fn rho_is_validated() {
        let s = sphere(1);
        let f = BoundaryField::zeros(s.num_triangles());
        let p = ExtensionParams::for_surface(&s);
        let r = s.inradius_estimate();
        for bad in [0.0, -0.1, 0.5 * r, r] {
            let params = ExtensionParams { rho: bad, ..p };
            assert!(matches!(
                extend_boundary_field(s.clone(), &f, params),
                Err(Error::InvalidParameter(_))
            ));
        }
    }
}
