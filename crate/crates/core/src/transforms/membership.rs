//! Finite-sample tests of the admissibility classes `M_ψ` (scalar part of
//! the Cauchy transform vanishes off Γ) and `M*_ψ` (on Γ).

use rayon::prelude::*;
use serde::Serialize;

use super::cauchy::cauchy_transform_near;
use super::kernel::kernel_unchecked;
use super::BoundaryField;
use crate::geometry::TriangulatedSurface;
use crate::probes::fibonacci_shells;
use crate::structural::StructuralSet;
use crate::{vec3, Error, Point, Result};

/// Probe radii, as multiples of the circumradius about the volume centroid.
pub const PROBE_RADII: [f64; 2] = [0.5, 2.0];
/// Probes per radius.
pub const PROBES_PER_SHELL: usize = 64;

/// Default off-Γ probe set: Fibonacci spheres at `{0.5, 2.0}` times the
/// circumradius.
pub fn default_probes(surface: &TriangulatedSurface) -> Vec<Point> {
    let c = surface.volume_centroid();
    let r = surface.circumradius(c);
    let radii: Vec<f64> = PROBE_RADII.iter().map(|k| k * r).collect();
    fibonacci_shells(PROBES_PER_SHELL, c, &radii)
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    /// `|Sc(·)|` per probe or node.
    pub values: Vec<f64>,
    /// Largest entry of `values`.
    pub max_scalar: f64,
    /// `max_scalar / max|f|` (zero for vanishing data).
    pub relative: f64,
    /// Relative tolerance the verdict was taken against.
    pub tolerance: f64,
    pub member: bool,
}

impl MembershipReport {
    fn from_values(values: Vec<f64>, f_norm: f64, tolerance: f64) -> Self {
        let max_scalar = values.iter().cloned().fold(0.0, f64::max);
        let relative = if f_norm > 0.0 { max_scalar / f_norm } else { 0.0 };
        Self {
            values,
            max_scalar,
            relative,
            tolerance,
            member: relative <= tolerance,
        }
    }

    /// Turn a failed verdict into `MembershipFailed`.
    pub fn ensure_member(&self) -> Result<()> {
        if self.member {
            Ok(())
        } else {
            Err(Error::MembershipFailed {
                value: self.relative,
                tolerance: self.tolerance,
            })
        }
    }
}

/// `max |Sc K_Γ[f](x)|` over off-Γ probes. The transform is evaluated with
/// closed-form near panels so probes may lie close to Γ.
pub fn m_psi_test(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    probes: &[Point],
    tolerance: f64,
) -> Result<MembershipReport> {
    f.ensure_matches(surface)?;
    f.ensure_pure_vector()?;
    let values = probes
        .par_iter()
        .map(|&x| cauchy_transform_near(surface, f, psi, x).scalar().norm())
        .collect();
    Ok(MembershipReport::from_values(values, f.max_norm(), tolerance))
}

/// `max |Sc Φ[f](t)|` over nodes `t` of Γ, where `Φ` is the principal value
/// with subtracted density and exclusion radius `eps_factor` times the
/// local triangle diameter. For pure-vector `f` this is half the scalar part
/// of the singular transform.
pub fn m_psi_star_test(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    nodes: &[usize],
    eps_factor: f64,
    tolerance: f64,
) -> Result<MembershipReport> {
    f.ensure_matches(surface)?;
    f.ensure_pure_vector()?;
    if let Some(&bad) = nodes.iter().find(|&&n| n >= surface.num_triangles()) {
        return Err(Error::InvalidParameter(format!("node {bad} out of range")));
    }
    let values = nodes
        .par_iter()
        .map(|&node| {
            let t = surface.centroids()[node];
            let ft = f.values[node];
            let eps = eps_factor * surface.diameters()[node];
            let mut sc = num_complex::Complex64::new(0.0, 0.0);
            for (tri, &c) in surface.centroids().iter().enumerate() {
                let d = vec3::sub(t, c);
                let r2 = vec3::dot(d, d);
                if tri == node || r2 <= eps * eps {
                    continue;
                }
                let k = kernel_unchecked(psi, d, r2) * surface.areas()[tri];
                let nu = psi.embed(surface.normals()[tri]);
                sc += ((k * nu) * (f.values[tri] - ft)).scalar();
            }
            sc.norm()
        })
        .collect();
    Ok(MembershipReport::from_values(values, f.max_norm(), tolerance))
}
