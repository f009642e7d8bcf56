//! Cauchy transform of boundary data and its right-handed and Sc/Vec forms.

use super::kernel::{embed_scaled, kernel_unchecked};
use super::panel::{edge_normal_log_sum, triangle_grad_integral};
use super::BoundaryField;
use crate::geometry::TriangulatedSurface;
use crate::quaternion::{Complex, ComplexQuaternion, RealQuaternion};
use crate::structural::StructuralSet;
use crate::{vec3, Error, Point, Result};

fn check_distance(surface: &TriangulatedSurface, x: Point) -> Result<()> {
    let d = surface.distance(x);
    let minimum = 2.0 * surface.h();
    if d < minimum {
        Err(Error::TooCloseToSurface {
            point: x,
            distance: d,
            minimum,
        })
    } else {
        Ok(())
    }
}

/// Integral of the kernel over triangle `t` seen from `x`: closed form when
/// `near`, centroid rule otherwise.
#[inline]
fn panel_kernel(surface: &TriangulatedSurface, psi: &StructuralSet, t: usize, x: Point, near: bool) -> RealQuaternion {
    if near {
        embed_scaled(psi, triangle_grad_integral(x, surface.corners(t)))
    } else {
        let d = vec3::sub(x, surface.centroids()[t]);
        kernel_unchecked(psi, d, vec3::dot(d, d)) * surface.areas()[t]
    }
}

/// Centroid-rule `Σ K(x − c_T) ν_ψ f_T |T|` without the distance check.
pub fn cauchy_transform_unchecked(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    x: Point,
) -> ComplexQuaternion {
    let mut acc = ComplexQuaternion::ZERO;
    for t in 0..surface.num_triangles() {
        let k = panel_kernel(surface, psi, t, x, false);
        acc += (k * psi.embed(surface.normals()[t])) * f.values[t];
    }
    acc
}

/// `K_Γ[f](x) = ∫_Γ K(x−ξ) ν_ψ(ξ) f(ξ) dS` by the centroid rule.
///
/// Fails with `TooCloseToSurface` when `dist(x, Γ) < 2h`; use
/// [`cauchy_transform_near`] or a boundary limit there.
pub fn cauchy_transform(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    x: Point,
) -> Result<ComplexQuaternion> {
    f.ensure_matches(surface)?;
    check_distance(surface, x)?;
    Ok(cauchy_transform_unchecked(surface, f, psi, x))
}

/// Right transform `[f]K_Γ(x) = ∫_Γ f(ξ) ν_ψ(ξ) K(x−ξ) dS`, centroid rule.
pub fn right_cauchy_transform(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    x: Point,
) -> Result<ComplexQuaternion> {
    f.ensure_matches(surface)?;
    check_distance(surface, x)?;
    let mut acc = ComplexQuaternion::ZERO;
    for t in 0..surface.num_triangles() {
        let k = panel_kernel(surface, psi, t, x, false);
        acc += f.values[t] * (psi.embed(surface.normals()[t]) * k);
    }
    Ok(acc)
}

/// Cauchy transform of the piecewise-constant density, every panel
/// integrated in closed form. Accurate arbitrarily close to Γ (off the panel
/// edges). Mixing closed-form and centroid panels by distance would make the
/// result depend on where the switch falls, which spoils convergence
/// studies of small residuals.
pub fn cauchy_transform_near(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    x: Point,
) -> ComplexQuaternion {
    let mut acc = ComplexQuaternion::ZERO;
    for t in 0..surface.num_triangles() {
        let k = panel_kernel(surface, psi, t, x, true);
        acc += (k * psi.embed(surface.normals()[t])) * f.values[t];
    }
    acc
}

/// Right-handed counterpart of [`cauchy_transform_near`].
pub fn right_cauchy_transform_near(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    x: Point,
) -> ComplexQuaternion {
    let mut acc = ComplexQuaternion::ZERO;
    for t in 0..surface.num_triangles() {
        let k = panel_kernel(surface, psi, t, x, true);
        acc += f.values[t] * (psi.embed(surface.normals()[t]) * k);
    }
    acc
}

/// One-sided limit of [`cauchy_transform_near`] at the centroid of `node`:
/// the node's own panel contributes its edge terms plus the solid angle
/// `±2π` of the side, `sign = +1` for the interior. Left (`right = false`)
/// or right transform.
pub(crate) fn centroid_limit(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    node: usize,
    sign: f64,
    right: bool,
) -> ComplexQuaternion {
    let x = surface.centroids()[node];
    let mut acc = ComplexQuaternion::ZERO;
    for t in 0..surface.num_triangles() {
        let k = if t == node {
            let n = surface.normals()[t];
            let v = vec3::add(
                vec3::scale(n, -sign * 2.0 * std::f64::consts::PI),
                edge_normal_log_sum(x, surface.corners(t)),
            );
            embed_scaled(psi, v)
        } else {
            panel_kernel(surface, psi, t, x, true)
        };
        let nu = psi.embed(surface.normals()[t]);
        acc += if right { f.values[t] * (nu * k) } else { (k * nu) * f.values[t] };
    }
    acc
}

/// Scalar and vector parts of the Cauchy transform of a pure-vector field,
/// accumulated separately:
/// `Sc = −Σ ⟨K, [ν_ψ, f]⟩ |T|`, `Vec = Σ (−⟨ν_ψ, f⟩ K + [K, [ν_ψ, f]]) |T|`.
pub fn sc_vec_split(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    x: Point,
) -> Result<(Complex, ComplexQuaternion)> {
    f.ensure_matches(surface)?;
    f.ensure_pure_vector()?;
    check_distance(surface, x)?;
    let mut sc = Complex::new(0.0, 0.0);
    let mut vec = ComplexQuaternion::ZERO;
    for t in 0..surface.num_triangles() {
        let k = panel_kernel(surface, psi, t, x, false).complexify();
        let nu = psi.embed(surface.normals()[t]).complexify();
        let fv = f.values[t].vector_part();
        let nf = nu.vec_cross(fv);
        sc -= k.vec_dot(nf);
        vec += k * (-nu.vec_dot(fv)) + k.vec_cross(nf);
    }
    Ok((sc, vec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_sphere;
    use crate::operators::{ConstantField, QuaternionField};
    use crate::structural::make_psi_theta;
    use crate::transforms::KernelField;
    use std::sync::Arc;

    #[test]
    fn constant_density_gives_indicator() {
        let (s, _) = make_sphere([0.0; 3], 1.0, 2).unwrap();
        let psi = make_psi_theta(0.9);
        let c = ComplexQuaternion::new(
            Complex::new(0.5, 0.1),
            Complex::new(1.0, 0.0),
            Complex::new(0.0, -2.0),
            Complex::new(0.3, 0.0),
        );
        let f = BoundaryField::sample(&s, Arc::new(ConstantField(c)));
        let inside = cauchy_transform(&s, &f, &psi, [0.1, 0.2, 0.0]).unwrap();
        let outside = cauchy_transform(&s, &f, &psi, [2.0, 0.5, 0.0]).unwrap();
        assert!(inside.max_abs_diff(c) < 2e-2 * c.norm_c(), "{inside:?}");
        assert!(outside.norm_c() < 2e-2 * c.norm_c());
        let r_in = right_cauchy_transform(&s, &f, &psi, [0.1, 0.2, 0.0]).unwrap();
        assert!(r_in.max_abs_diff(c) < 2e-2 * c.norm_c());
        // On a coarse mesh every panel is near, and closed-form panels make
        // constants exact.
        let (s1, _) = make_sphere([0.0; 3], 1.0, 1).unwrap();
        let f1 = BoundaryField::sample(&s1, Arc::new(ConstantField(c)));
        let near = cauchy_transform_near(&s1, &f1, &psi, [0.0, 0.0, 0.95]);
        assert!(near.max_abs_diff(c) < 1e-10, "{near:?}");
    }

    #[test]
    fn too_close_is_rejected() {
        let (s, _) = make_sphere([0.0; 3], 1.0, 2).unwrap();
        let f = BoundaryField::zeros(s.num_triangles());
        let psi = make_psi_theta(0.0);
        assert!(matches!(
            cauchy_transform(&s, &f, &psi, [0.0, 0.0, 0.99]),
            Err(Error::TooCloseToSurface { .. })
        ));
        assert_eq!(cauchy_transform(&s, &f, &psi, [0.0; 3]).unwrap(), ComplexQuaternion::ZERO);
    }

    #[test]
    fn sc_vec_reassembles() {
        let (s, _) = make_sphere([0.0; 3], 1.0, 2).unwrap();
        let psi = make_psi_theta(2.2);
        let field = KernelField::new(psi, [0.0, 0.3, 2.0]);
        let vals = s
            .centroids()
            .iter()
            .map(|&c| field.eval(c) * Complex::new(1.0, 0.7))
            .collect();
        let f = BoundaryField::new(vals);
        for x in [[0.1, 0.0, -0.2], [3.0, 1.0, 0.0]] {
            let (sc, v) = sc_vec_split(&s, &f, &psi, x).unwrap();
            let full = cauchy_transform(&s, &f, &psi, x).unwrap();
            assert!((ComplexQuaternion::from_scalar(sc) + v).max_abs_diff(full) < 1e-12);
        }
        let mut bad = f.clone();
        bad.values[0] = bad.values[0] + ComplexQuaternion::ONE;
        assert!(matches!(sc_vec_split(&s, &bad, &psi, [0.0; 3]), Err(Error::NotPureVector { .. })));
    }
}
