//! Splitting of admissible boundary data into traces of an interior and an
//! exterior solution.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::extension::{ExtensionParams, SmoothExtension, WhitneyField};
use crate::geometry::{TetrahedralMesh, TriangulatedSurface};
use crate::operators::{mt_residual, two_sided_check, DerivativeScheme, PsiDerivativeField, QuaternionField, SharedField};
use crate::probes::fibonacci_sphere;
use crate::quaternion::ComplexQuaternion;
use crate::structural::{make_psi_theta, StructuralSet};
use crate::transforms::{
    default_probes, holder_condition_estimate, m_psi_test, normal_limit, BoundaryField, MembershipReport, Side,
    Teodorescu, TeodorescuOptions, RICHARDSON_LEVELS,
};
use crate::{vec3, Point, Result};

/// Knobs of [`decompose_with`] beyond the extension parameters.
#[derive(Clone, Debug, Serialize)]
pub struct DecomposeOptions {
    pub params: ExtensionParams,
    /// Relative tolerance of the membership pre-check.
    pub membership_tolerance: f64,
    pub teodorescu: TeodorescuOptions,
    /// Number of nodes at which the regularity estimate is sampled.
    pub holder_samples: usize,
}

impl DecomposeOptions {
    pub fn for_surface(surface: &TriangulatedSurface) -> Self {
        Self {
            params: ExtensionParams::for_surface(surface),
            membership_tolerance: 0.02,
            teodorescu: TeodorescuOptions::default(),
            holder_samples: 8,
        }
    }
}

/// `F⁺ = f^w − T[ψD f^w]`, evaluated with the smooth extension so that it
/// can be approached from either side of Γ.
struct InteriorField {
    extension: Arc<SmoothExtension>,
    transform: Arc<Teodorescu>,
}

impl QuaternionField for InteriorField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        self.extension.eval(x) - self.transform.eval_at(x)
    }
}

/// Output of [`decompose`].
pub struct Decomposition {
    /// Solution on the interior domain Ω₊.
    pub f_plus: SharedField,
    /// Solution on the exterior domain Ω₋, vanishing at infinity.
    pub f_minus: SharedField,
    pub theta: f64,
    pub params: ExtensionParams,
    pub membership: MembershipReport,
    /// Regularity diagnostics at sampled nodes; empty when all is well.
    pub warnings: Vec<String>,
    /// Quadrature nodes used for the volume integral.
    pub volume_nodes: usize,
    whitney: WhitneyField,
    surface: Arc<TriangulatedSurface>,
}

impl std::fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Decomposition")
            .field("theta", &self.theta)
            .field("params", &self.params)
            .field("volume_nodes", &self.volume_nodes)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl Decomposition {
    /// The Whitney field `f^w` the construction started from.
    pub fn whitney(&self) -> &WhitneyField {
        &self.whitney
    }

    pub fn surface(&self) -> &Arc<TriangulatedSurface> {
        &self.surface
    }

    pub fn psi(&self) -> StructuralSet {
        make_psi_theta(self.theta)
    }
}

/// Decompose with the default options for the surface and the given
/// extension parameters.
pub fn decompose(
    surface: &TriangulatedSurface,
    mesh: &TetrahedralMesh,
    f: &BoundaryField,
    theta: f64,
    params: &ExtensionParams,
) -> Result<Decomposition> {
    let options = DecomposeOptions {
        params: *params,
        ..DecomposeOptions::for_surface(surface)
    };
    decompose_with(surface, mesh, f, theta, &options)
}

/// Write pure-vector data `f ∈ M_ψ` as `F⁺ + F⁻` on Γ, with
/// `F⁺ = f^w − T[ψD f^w]` on Ω₊ and `F⁻ = T[ψD f^w]` on Ω₋.
///
/// Fails with `MembershipFailed` when the scalar part of the Cauchy
/// transform is not small at the default probes, and with
/// `QuadratureBudgetExceeded` when the volume quadrature would be too large.
pub fn decompose_with(
    surface: &TriangulatedSurface,
    mesh: &TetrahedralMesh,
    f: &BoundaryField,
    theta: f64,
    options: &DecomposeOptions,
) -> Result<Decomposition> {
    f.ensure_matches(surface)?;
    f.ensure_pure_vector()?;
    let psi = make_psi_theta(theta);
    let surface = Arc::new(surface.clone());
    let extension = Arc::new(SmoothExtension::new(surface.clone(), f, options.params)?);
    let membership = m_psi_test(&surface, f, &psi, &default_probes(&surface), options.membership_tolerance)?;
    membership.ensure_member()?;

    let n = surface.num_triangles();
    let samples = options.holder_samples.min(n);
    let mut warnings = Vec::new();
    for k in 0..samples {
        let node = k * n / samples.max(1);
        if let Some(w) = holder_condition_estimate(&surface, f, node)?.warning {
            warnings.push(format!("node {node}: {w}"));
        }
    }

    let g: SharedField = Arc::new(PsiDerivativeField {
        psi,
        field: extension.clone(),
        scheme: DerivativeScheme::Central {
            h: options.params.fd_step,
        },
    });
    let transform = Arc::new(Teodorescu::new(mesh, g, psi, options.teodorescu)?);
    let volume_nodes = transform.num_nodes();
    let f_plus: SharedField = Arc::new(InteriorField {
        extension: extension.clone(),
        transform: transform.clone(),
    });
    Ok(Decomposition {
        f_plus,
        f_minus: transform,
        theta,
        params: options.params,
        membership,
        warnings,
        volume_nodes,
        whitney: WhitneyField::from_smooth(extension),
        surface,
    })
}

/// One row of the far-field table.
#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub radius: f64,
    /// `max |F⁻|` over a Fibonacci sphere of that radius.
    pub max_norm: f64,
    /// `radius² · max_norm`, roughly constant under `1/|x|²` decay.
    pub scaled: f64,
}

/// Output of [`verify_decomposition`].
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub nodes: Vec<usize>,
    /// `|F⁺(t) + F⁻(t) − f(t)|` per node, one-sided limits taken along
    /// the normal.
    pub trace_residuals: Vec<f64>,
    pub max_trace_residual: f64,
    /// `max_trace_residual / ‖f‖∞`.
    pub relative_trace_residual: f64,
    /// Nodes at which extrapolation did not contract and the sample
    /// closest to Γ was used instead.
    pub extrapolation_fallbacks: usize,
    pub interior_probes: Vec<Point>,
    pub exterior_probes: Vec<Point>,
    /// Largest of the four system residuals of `F⁺` per interior probe.
    pub interior_mt: Vec<f64>,
    /// Same for `F⁻` at exterior probes.
    pub exterior_mt: Vec<f64>,
    pub max_interior_mt: f64,
    pub max_exterior_mt: f64,
    /// Largest `|ψ grad Sc F±|` over the probes; zero for two-sided
    /// solutions.
    pub max_scalar_gradient: f64,
    pub decay: Vec<DecayRow>,
    pub f_norm: f64,
}

/// Knobs of [`verify_decomposition_with`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Boundary nodes for the trace residual; all when `None`.
    pub nodes: Option<Vec<usize>>,
    /// Probes for the system residual of `F⁺`; default a sphere of 32
    /// points at half the circumradius.
    pub interior_probes: Option<Vec<Point>>,
    /// Probes for `F⁻`; default 32 points at twice the circumradius.
    pub exterior_probes: Option<Vec<Point>>,
    /// Multiples of the surface diameter at which the decay table is taken.
    pub decay_radii: Vec<f64>,
    pub scheme: Option<DerivativeScheme>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            nodes: None,
            interior_probes: None,
            exterior_probes: None,
            decay_radii: vec![1.0, 2.0, 5.0, 10.0],
            scheme: None,
        }
    }
}

/// Check a decomposition against its data with default options.
pub fn verify_decomposition(d: &Decomposition, f: &BoundaryField) -> Result<DecompositionReport> {
    verify_decomposition_with(d, f, &VerifyOptions::default())
}

/// Trace residual through one-sided normal limits of `F⁺` (interior) and
/// `F⁻` (exterior), system residuals of both fields at probes, and the
/// far-field decay of `F⁻`.
pub fn verify_decomposition_with(
    d: &Decomposition,
    f: &BoundaryField,
    options: &VerifyOptions,
) -> Result<DecompositionReport> {
    let s = &d.surface;
    f.ensure_matches(s)?;
    let nodes: Vec<usize> = options
        .nodes
        .clone()
        .unwrap_or_else(|| (0..s.num_triangles()).collect());
    let limit = |field: &SharedField, node: usize, side: Side| -> (ComplexQuaternion, bool) {
        let t = s.centroids()[node];
        let n = s.normals()[node];
        match normal_limit(|x| field.eval(x), t, n, s.h(), side) {
            Ok(v) => (v, false),
            Err(_) => {
                let sign = if side == Side::Interior { -1.0 } else { 1.0 };
                let delta = 4.0 * s.h() / f64::powi(2.0, RICHARDSON_LEVELS as i32 - 1);
                (field.eval(vec3::add(t, vec3::scale(n, sign * delta))), true)
            }
        }
    };
    let rows: Vec<(f64, usize)> = nodes
        .par_iter()
        .map(|&node| {
            let (p, fp) = limit(&d.f_plus, node, Side::Interior);
            let (m, fm) = limit(&d.f_minus, node, Side::Exterior);
            ((p + m - f.values[node]).norm_c(), fp as usize + fm as usize)
        })
        .collect();
    let trace_residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let extrapolation_fallbacks = rows.iter().filter(|r| r.1 > 0).count();
    let max_trace_residual = trace_residuals.iter().cloned().fold(0.0, f64::max);
    let f_norm = f.max_norm();

    let center = s.volume_centroid();
    let radius = s.circumradius(center);
    let interior_probes = options
        .interior_probes
        .clone()
        .unwrap_or_else(|| fibonacci_sphere(32, center, 0.5 * s.inradius_estimate().min(radius)));
    let exterior_probes = options
        .exterior_probes
        .clone()
        .unwrap_or_else(|| fibonacci_sphere(32, center, 2.0 * radius));
    let scheme = options
        .scheme
        .unwrap_or_else(|| DerivativeScheme::for_diameter(s.diameter()));
    let mt = |field: &SharedField, probes: &[Point]| -> Result<Vec<f64>> {
        probes
            .par_iter()
            .map(|&x| Ok(mt_residual(d.theta, field, x, scheme)?.iter().fold(0.0, |m: f64, v| m.max(v.norm()))))
            .collect()
    };
    let interior_mt = mt(&d.f_plus, &interior_probes)?;
    let exterior_mt = mt(&d.f_minus, &exterior_probes)?;
    let grad_p = two_sided_check(d.theta, &d.f_plus, &interior_probes, scheme, f64::INFINITY)?.max_psi_grad;
    let grad_m = two_sided_check(d.theta, &d.f_minus, &exterior_probes, scheme, f64::INFINITY)?.max_psi_grad;

    let diam = s.diameter();
    let decay = options
        .decay_radii
        .iter()
        .map(|&k| {
            let r = k * diam;
            let max_norm = fibonacci_sphere(32, center, r)
                .par_iter()
                .map(|&x| d.f_minus.eval(x).norm_c())
                .reduce(|| 0.0, f64::max);
            DecayRow {
                radius: r,
                max_norm,
                scaled: r * r * max_norm,
            }
        })
        .collect();

    Ok(DecompositionReport {
        nodes,
        max_trace_residual,
        relative_trace_residual: if f_norm > 0.0 { max_trace_residual / f_norm } else { max_trace_residual },
        trace_residuals,
        extrapolation_fallbacks,
        max_interior_mt: interior_mt.iter().cloned().fold(0.0, f64::max),
        max_exterior_mt: exterior_mt.iter().cloned().fold(0.0, f64::max),
        interior_probes,
        exterior_probes,
        interior_mt,
        exterior_mt,
        max_scalar_gradient: grad_p.max(grad_m),
        decay,
        f_norm,
    })
}
