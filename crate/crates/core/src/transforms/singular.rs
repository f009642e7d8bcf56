//! Singular Cauchy transform, one-sided boundary limits and the
//! Sokhotski–Plemelj check.

use rayon::prelude::*;
use serde::Serialize;

use super::cauchy::centroid_limit;
use super::kernel::kernel_unchecked;
use super::BoundaryField;
use crate::geometry::TriangulatedSurface;
use crate::quaternion::ComplexQuaternion;
use crate::structural::StructuralSet;
use crate::{vec3, Error, Point, Result};

/// Default exclusion radius of the principal-value rule, in units of the
/// diameter of the node's own triangle. The node's own triangle is always
/// excluded; with the subtracted density the excluded ball contributes an
/// error proportional to its radius, so the default excludes nothing more.
pub const DEFAULT_EPS_FACTOR: f64 = 0.0;

/// Principal-value term `Φ[f](t) = ∫ K(t−τ) ν_ψ (f(τ) − f(t)) dS` by the
/// centroid rule with the ball `|c_T − t| ≤ ε` excluded.
fn phi(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    node: usize,
    eps: f64,
    right: bool,
) -> ComplexQuaternion {
    let t = surface.centroids()[node];
    let ft = f.values[node];
    let eps2 = eps * eps;
    let mut acc = ComplexQuaternion::ZERO;
    for (tri, &c) in surface.centroids().iter().enumerate() {
        let d = vec3::sub(t, c);
        let r2 = vec3::dot(d, d);
        if tri == node || r2 <= eps2 {
            continue;
        }
        let k = kernel_unchecked(psi, d, r2) * surface.areas()[tri];
        let nu = psi.embed(surface.normals()[tri]);
        let df = f.values[tri] - ft;
        acc += if right { df * (nu * k) } else { (k * nu) * df };
    }
    acc
}

fn check_node(surface: &TriangulatedSurface, f: &BoundaryField, node: usize, eps_factor: f64) -> Result<()> {
    f.ensure_matches(surface)?;
    if node >= surface.num_triangles() {
        return Err(Error::InvalidParameter(format!(
            "node {node} out of range ({} nodes)",
            surface.num_triangles()
        )));
    }
    if !(eps_factor >= 0.0) {
        return Err(Error::InvalidParameter(format!("eps factor must be non-negative, got {eps_factor}")));
    }
    Ok(())
}

/// `S_Γ[f](t) = 2Φ[f](t) + f(t)` at a quadrature node, with exclusion radius
/// `eps_factor` times the node triangle's diameter.
pub fn singular_cauchy(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    node: usize,
    eps_factor: f64,
) -> Result<ComplexQuaternion> {
    check_node(surface, f, node, eps_factor)?;
    let eps = eps_factor * surface.diameters()[node];
    Ok(phi(surface, f, psi, node, eps, false) * 2.0 + f.values[node])
}

/// Right singular transform `[f]S_Γ(t) = 2[f]Φ(t) + f(t)`.
pub fn right_singular_cauchy(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    node: usize,
    eps_factor: f64,
) -> Result<ComplexQuaternion> {
    check_node(surface, f, node, eps_factor)?;
    let eps = eps_factor * surface.diameters()[node];
    Ok(phi(surface, f, psi, node, eps, true) * 2.0 + f.values[node])
}

/// Side of Γ from which a limit is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `Ω₊`, the bounded domain.
    Interior,
    /// `Ω₋`, the exterior.
    Exterior,
}

/// Number of offsets used by the Richardson scheme.
pub const RICHARDSON_LEVELS: usize = 4;

/// Limit of `eval(δ)` as `δ → 0⁺` from samples at `δ_k = δ₀/2^k`,
/// `k = 0..RICHARDSON_LEVELS`, assuming an expansion in powers of `δ`.
///
/// Fails with `ExtrapolationDiverged` when the last sample difference is
/// larger than the first (beyond round-off).
pub fn richardson_limit(
    eval: impl Fn(f64) -> ComplexQuaternion,
    delta0: f64,
) -> Result<ComplexQuaternion> {
    let samples: Vec<ComplexQuaternion> = (0..RICHARDSON_LEVELS)
        .map(|k| eval(delta0 / f64::powi(2.0, k as i32)))
        .collect();
    let first = samples[1].max_abs_diff(samples[0]);
    let last = samples[RICHARDSON_LEVELS - 1].max_abs_diff(samples[RICHARDSON_LEVELS - 2]);
    let scale = samples.iter().map(|s| s.norm_c()).fold(0.0, f64::max);
    if last > first + 1e-10 * scale.max(1e-300) {
        return Err(Error::ExtrapolationDiverged { first, last });
    }
    let mut table = samples;
    let mut factor = 2.0;
    while table.len() > 1 {
        table = table
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - 1.0))
            .collect();
        factor *= 2.0;
    }
    Ok(table[0])
}

/// One-sided limit of an arbitrary evaluator at `t` along the unit normal
/// `normal`: interior limits sample `t − δν`, exterior limits `t + δν`,
/// with `δ₀ = 4h`.
pub fn normal_limit(
    eval: impl Fn(Point) -> ComplexQuaternion,
    t: Point,
    normal: Point,
    h: f64,
    side: Side,
) -> Result<ComplexQuaternion> {
    let sign = match side {
        Side::Interior => -1.0,
        Side::Exterior => 1.0,
    };
    richardson_limit(|d| eval(vec3::add(t, vec3::scale(normal, sign * d))), 4.0 * h)
}

fn side_sign(side: Side) -> f64 {
    match side {
        Side::Interior => 1.0,
        Side::Exterior => -1.0,
    }
}

/// `lim K_Γ[f](x)` as `x → t` from the given side, `t` the centroid of
/// `node`. `K⁺` is the interior limit and `K⁻` the exterior one.
///
/// The limit of the piecewise-constant density is taken in closed form:
/// the node's own panel contributes its solid angle `±2π` and every other
/// panel is integrated exactly.
pub fn boundary_limit(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    node: usize,
    side: Side,
) -> Result<ComplexQuaternion> {
    check_node(surface, f, node, 0.0)?;
    Ok(centroid_limit(surface, f, psi, node, side_sign(side), false))
}

/// Right-handed counterpart of [`boundary_limit`].
pub fn right_boundary_limit(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    node: usize,
    side: Side,
) -> Result<ComplexQuaternion> {
    check_node(surface, f, node, 0.0)?;
    Ok(centroid_limit(surface, f, psi, node, side_sign(side), true))
}

/// Limits, singular transform and Sokhotski–Plemelj residuals at a set of
/// nodes.
#[derive(Clone, Debug, Serialize)]
pub struct JumpReport {
    pub nodes: Vec<usize>,
    pub k_plus: Vec<ComplexQuaternion>,
    pub k_minus: Vec<ComplexQuaternion>,
    pub s_value: Vec<ComplexQuaternion>,
    /// `|(K⁺ − K⁻) − f|` per node.
    pub jump_residuals: Vec<f64>,
    /// `|(K⁺ + K⁻) − S|` per node.
    pub sum_residuals: Vec<f64>,
    pub max_jump_residual: f64,
    pub max_sum_residual: f64,
    /// `max |f|` over all nodes, for relative tolerances.
    pub f_norm: f64,
}

/// Evaluate both Sokhotski–Plemelj identities at `nodes` (all nodes when
/// `None`), in parallel.
pub fn jump_check(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    eps_factor: f64,
    nodes: Option<&[usize]>,
) -> Result<JumpReport> {
    f.ensure_matches(surface)?;
    let nodes: Vec<usize> = match nodes {
        Some(n) => n.to_vec(),
        None => (0..surface.num_triangles()).collect(),
    };
    let rows: Vec<(ComplexQuaternion, ComplexQuaternion, ComplexQuaternion)> = nodes
        .par_iter()
        .map(|&n| {
            Ok((
                boundary_limit(surface, f, psi, n, Side::Interior)?,
                boundary_limit(surface, f, psi, n, Side::Exterior)?,
                singular_cauchy(surface, f, psi, n, eps_factor)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut report = JumpReport {
        nodes: nodes.clone(),
        k_plus: Vec::with_capacity(rows.len()),
        k_minus: Vec::with_capacity(rows.len()),
        s_value: Vec::with_capacity(rows.len()),
        jump_residuals: Vec::with_capacity(rows.len()),
        sum_residuals: Vec::with_capacity(rows.len()),
        max_jump_residual: 0.0,
        max_sum_residual: 0.0,
        f_norm: f.max_norm(),
    };
    for (&n, (kp, km, s)) in nodes.iter().zip(rows) {
        let j = ((kp - km) - f.values[n]).norm_c();
        let r = ((kp + km) - s).norm_c();
        report.max_jump_residual = report.max_jump_residual.max(j);
        report.max_sum_residual = report.max_sum_residual.max(r);
        report.k_plus.push(kp);
        report.k_minus.push(km);
        report.s_value.push(s);
        report.jump_residuals.push(j);
        report.sum_residuals.push(r);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_sphere;
    use crate::operators::ConstantField;
    use crate::structural::make_psi_theta;
    use std::sync::Arc;

    #[test]
    fn richardson_removes_polynomial_terms() {
        let c = ComplexQuaternion::ONE * 2.0;
        let lim = richardson_limit(|d| c + ComplexQuaternion::I * (3.0 * d - d * d + 0.5 * d * d * d), 0.4).unwrap();
        assert!(lim.max_abs_diff(c) < 1e-12);
        let err = richardson_limit(|d| ComplexQuaternion::ONE * (1.0 / d), 0.4);
        assert!(matches!(err, Err(Error::ExtrapolationDiverged { .. })));
    }

    #[test]
    fn constant_data() {
        let (s, _) = make_sphere([0.0; 3], 1.0, 2).unwrap();
        let psi = make_psi_theta(0.5);
        let c = ComplexQuaternion::J * 1.5;
        let f = BoundaryField::sample(&s, Arc::new(ConstantField(c)));
        assert_eq!(singular_cauchy(&s, &f, &psi, 7, DEFAULT_EPS_FACTOR).unwrap(), c);
        let zero = BoundaryField::zeros(s.num_triangles());
        assert_eq!(boundary_limit(&s, &zero, &psi, 3, Side::Interior).unwrap(), ComplexQuaternion::ZERO);
        let kp = boundary_limit(&s, &f, &psi, 3, Side::Interior).unwrap();
        let km = boundary_limit(&s, &f, &psi, 3, Side::Exterior).unwrap();
        assert!((kp - km).max_abs_diff(c) < 1e-12, "{:?}", kp - km);
    }
}
