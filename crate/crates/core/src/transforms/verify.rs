//! Borel–Pompeiu residuals and the equivalence suite for membership in
//! `M_ψ`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::cauchy::cauchy_transform_near;
use super::singular::{right_singular_cauchy, singular_cauchy};
use super::teodorescu::{Teodorescu, TeodorescuOptions};
use super::BoundaryField;
use crate::geometry::{TetrahedralMesh, TriangulatedSurface};
use crate::operators::{apply_d_psi, DerivativeScheme, PsiDerivativeField, QuaternionField, SharedField};
use crate::quaternion::ComplexQuaternion;
use crate::structural::StructuralSet;
use crate::{Error, Point, Result};

/// `K_Γ[f] + T[ψD f] − χ_Ω f` for a differentiable field `f`.
pub struct BorelPompeiu {
    surface: Arc<TriangulatedSurface>,
    psi: StructuralSet,
    field: SharedField,
    trace: BoundaryField,
    teodorescu: Teodorescu,
}

impl BorelPompeiu {
    /// `scheme` selects how `ψD f` is computed inside the volume integral.
    pub fn new(
        surface: Arc<TriangulatedSurface>,
        mesh: &TetrahedralMesh,
        field: SharedField,
        psi: StructuralSet,
        scheme: DerivativeScheme,
        options: TeodorescuOptions,
    ) -> Result<Self> {
        if scheme == DerivativeScheme::Analytic && field.gradient(surface.centroids()[0]).is_none() {
            return Err(Error::MissingDerivative { order: "first" });
        }
        let g: SharedField = Arc::new(PsiDerivativeField {
            psi,
            field: field.clone(),
            scheme,
        });
        let teodorescu = Teodorescu::new(mesh, g, psi, options)?;
        let trace = BoundaryField::sample(&surface, field.clone());
        Ok(Self {
            surface,
            psi,
            field,
            trace,
            teodorescu,
        })
    }

    /// Residual at an off-Γ point; fails with `TooCloseToSurface` within
    /// `h` of Γ. Panels near `x` are integrated in closed form.
    pub fn residual(&self, x: Point) -> Result<ComplexQuaternion> {
        let d = self.surface.distance(x);
        if d < self.surface.h() {
            return Err(Error::TooCloseToSurface {
                point: x,
                distance: d,
                minimum: self.surface.h(),
            });
        }
        let k = cauchy_transform_near(&self.surface, &self.trace, &self.psi, x);
        let t = self.teodorescu.eval_at(x);
        let inside = self.surface.contains(x);
        Ok(if inside { k + t - self.field.eval(x) } else { k + t })
    }

    pub fn teodorescu(&self) -> &Teodorescu {
        &self.teodorescu
    }
}

/// One-shot Borel–Pompeiu residual with default options and central
/// differences of step `1e-4 · diam`.
pub fn borel_pompeiu_residual(
    surface: &TriangulatedSurface,
    mesh: &TetrahedralMesh,
    f: SharedField,
    psi: &StructuralSet,
    x: Point,
) -> Result<ComplexQuaternion> {
    let scheme = DerivativeScheme::for_diameter(surface.diameter());
    BorelPompeiu::new(Arc::new(surface.clone()), mesh, f, *psi, scheme, TeodorescuOptions::default())?.residual(x)
}

struct TransformField<'a> {
    surface: &'a TriangulatedSurface,
    f: &'a BoundaryField,
    psi: &'a StructuralSet,
}

impl QuaternionField for TransformField<'_> {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        cauchy_transform_near(self.surface, self.f, self.psi, x)
    }
}

/// Relative tolerances of the three membership indicators.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EquivalenceTolerances {
    /// On `max |Sc K_Γ[f]| / max|f|` over probes.
    pub scalar: f64,
    /// On `max |D^ψ K_Γ[f]| / max|f|` over probes.
    pub right: f64,
    /// On `max |S[f] − [f]S| / max|f|` over nodes.
    pub singular: f64,
}

impl Default for EquivalenceTolerances {
    fn default() -> Self {
        Self {
            scalar: 0.02,
            right: 0.1,
            singular: 0.1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub scalar_indicator: f64,
    pub right_indicator: f64,
    pub singular_indicator: f64,
    pub tolerances: EquivalenceTolerances,
    /// Verdict of each indicator, `true` meaning "in M_ψ".
    pub verdicts: [bool; 3],
    pub unanimous: bool,
}

/// Evaluate the three indicators whose agreement the equivalence theorems
/// assert for pure-vector data: smallness of `Sc K_Γ[f]` off Γ,
/// right-hyperholomorphy of `K_Γ[f]`, and agreement of the left and right
/// singular transforms on Γ. Probes must lie off Γ; panels near a probe
/// are integrated in closed form.
pub fn equivalence_suite(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    psi: &StructuralSet,
    probes: &[Point],
    nodes: &[usize],
    eps_factor: f64,
    tolerances: EquivalenceTolerances,
) -> Result<EquivalenceReport> {
    f.ensure_matches(surface)?;
    f.ensure_pure_vector()?;
    let norm = f.max_norm().max(1e-300);
    let h_fd = 1e-4 * surface.diameter();
    let per_probe: Vec<(f64, f64)> = probes
        .par_iter()
        .map(|&x| {
            let k = cauchy_transform_near(surface, f, psi, x);
            let field = TransformField { surface, f, psi };
            let right = apply_d_psi(psi, &field, x, DerivativeScheme::Central { h: h_fd })?;
            Ok((k.scalar().norm(), right.norm_c()))
        })
        .collect::<Result<_>>()?;
    let scalar_indicator = per_probe.iter().map(|p| p.0).fold(0.0, f64::max) / norm;
    let right_indicator = per_probe.iter().map(|p| p.1).fold(0.0, f64::max) / norm;
    let singular_indicator = nodes
        .par_iter()
        .map(|&n| {
            let l = singular_cauchy(surface, f, psi, n, eps_factor)?;
            let r = right_singular_cauchy(surface, f, psi, n, eps_factor)?;
            Ok((l - r).norm_c())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max)
        / norm;
    let verdicts = [
        scalar_indicator <= tolerances.scalar,
        right_indicator <= tolerances.right,
        singular_indicator <= tolerances.singular,
    ];
    Ok(EquivalenceReport {
        scalar_indicator,
        right_indicator,
        singular_indicator,
        tolerances,
        verdicts,
        unanimous: verdicts[0] == verdicts[1] && verdicts[1] == verdicts[2],
    })
}
