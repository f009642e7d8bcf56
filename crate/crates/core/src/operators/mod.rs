//! Dirac-type operators `ψD`, `D^ψ`, the ψ^θ partial operators and the
//! residuals of the generalized Moisil–Teodorescu system.

mod field;
pub mod special;

pub use field::{
    ConstantField, DomainHint, FnField, GridField, Monomial, Polynomial, QuaternionField,
    ScaledField, SharedField, SumField,
};
pub use special::{list_special_cases, special_case_map, MappedField, SpecialCase, SpecialCaseRow};

use serde::Serialize;

use crate::quaternion::{Complex, ComplexQuaternion, RealQuaternion};
use crate::structural::{exp_i, make_psi_theta, StructuralSet};
use crate::{Error, Point, Result};

/// How partial derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DerivativeScheme {
    /// Use the field's own `gradient`/`hessian`.
    Analytic,
    /// Central differences with step `h`.
    Central { h: f64 },
}

impl Default for DerivativeScheme {
    fn default() -> Self {
        DerivativeScheme::Central { h: 1e-4 }
    }
}

impl DerivativeScheme {
    /// Central differences with `h = 1e-4 · diameter`.
    pub fn for_diameter(diameter: f64) -> Self {
        DerivativeScheme::Central { h: 1e-4 * diameter }
    }
}

fn offset(x: Point, k: usize, d: f64) -> Point {
    let mut y = x;
    y[k] += d;
    y
}

fn check_stencil<F: QuaternionField + ?Sized>(f: &F, x: Point, h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    if f.domain().admits_stencil(x, h) {
        Ok(())
    } else {
        Err(Error::StencilOutsideDomain { point: x, h })
    }
}

fn central_partials<F: QuaternionField + ?Sized>(f: &F, x: Point, h: f64) -> [ComplexQuaternion; 3] {
    std::array::from_fn(|k| (f.eval(offset(x, k, h)) - f.eval(offset(x, k, -h))) / (2.0 * h))
}

/// `[∂f/∂x1, ∂f/∂x2, ∂f/∂x3]` at `x`.
pub fn partials<F: QuaternionField + ?Sized>(
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<[ComplexQuaternion; 3]> {
    match scheme {
        DerivativeScheme::Analytic => f
            .gradient(x)
            .ok_or(Error::MissingDerivative { order: "first" }),
        DerivativeScheme::Central { h } => {
            check_stencil(f, x, h)?;
            Ok(central_partials(f, x, h))
        }
    }
}

/// Central-difference partials without the domain check, for internal
/// callers whose fields are defined on all of ℝ³.
pub(crate) fn partials_unchecked<F: QuaternionField + ?Sized>(
    f: &F,
    x: Point,
    h: f64,
) -> [ComplexQuaternion; 3] {
    central_partials(f, x, h)
}

/// `H[j][k] = ∂²f/∂x_j∂x_k`. The central scheme nests first-derivative
/// stencils with step `√h`.
pub fn second_partials<F: QuaternionField + ?Sized>(
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<[[ComplexQuaternion; 3]; 3]> {
    match scheme {
        DerivativeScheme::Analytic => f
            .hessian(x)
            .ok_or(Error::MissingDerivative { order: "second" }),
        DerivativeScheme::Central { h } => {
            let h2 = h.sqrt();
            check_stencil(f, x, 2.0 * h2)?;
            let mut out = [[ComplexQuaternion::ZERO; 3]; 3];
            for j in 0..3 {
                let gp = central_partials(f, offset(x, j, h2), h2);
                let gm = central_partials(f, offset(x, j, -h2), h2);
                for k in 0..3 {
                    out[j][k] = (gp[k] - gm[k]) / (2.0 * h2);
                }
            }
            Ok(out)
        }
    }
}

/// `Σ ψ^k · d_k`.
pub fn left_combine(psi: &StructuralSet, d: &[ComplexQuaternion; 3]) -> ComplexQuaternion {
    (0..3).map(|k| psi.psi[k] * d[k]).sum()
}

/// `Σ d_k · ψ^k`.
pub fn right_combine(psi: &StructuralSet, d: &[ComplexQuaternion; 3]) -> ComplexQuaternion {
    (0..3).map(|k| d[k] * psi.psi[k]).sum()
}

/// `ψD[f](x) = Σ ψ^k ∂f/∂x_k`.
pub fn apply_psi_d<F: QuaternionField + ?Sized>(
    psi: &StructuralSet,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(left_combine(psi, &partials(f, x, scheme)?))
}

/// `D^ψ[f](x) = Σ ∂f/∂x_k ψ^k`.
pub fn apply_d_psi<F: QuaternionField + ?Sized>(
    psi: &StructuralSet,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(right_combine(psi, &partials(f, x, scheme)?))
}

/// Coefficient quaternions of the ψ^θ partial operators.
#[derive(Clone, Copy, Debug)]
struct ThetaUnits {
    e: RealQuaternion,
    ie: RealQuaternion,
    iej: RealQuaternion,
    iek: RealQuaternion,
}

impl ThetaUnits {
    fn new(theta: f64) -> Self {
        let e = exp_i(theta);
        let i = RealQuaternion::I;
        Self {
            e,
            ie: i * e,
            iej: i * e * RealQuaternion::J,
            iek: i * e * RealQuaternion::K,
        }
    }
}

fn scaled(c: Complex, q: RealQuaternion) -> ComplexQuaternion {
    q.complexify() * c
}

/// Component `m` (0..=3) of each partial derivative.
fn comp(d: &[ComplexQuaternion; 3], m: usize) -> [Complex; 3] {
    [d[0].0[m], d[1].0[m], d[2].0[m]]
}

/// `ψ^θ div` of the vector part, from precomputed partials.
pub fn psi_div_from_partials(theta: f64, d: &[ComplexQuaternion; 3]) -> ComplexQuaternion {
    let u = ThetaUnits::new(theta);
    let [_, d2f2, _] = comp(d, 2);
    let [_, _, d3f3] = comp(d, 3);
    ComplexQuaternion::from_scalar(comp(d, 1)[0]) + scaled(d2f2 - d3f3, u.ie)
}

/// `ψ^θ grad` of the scalar part, from precomputed partials.
pub fn psi_grad_from_partials(theta: f64, d: &[ComplexQuaternion; 3]) -> ComplexQuaternion {
    let u = ThetaUnits::new(theta);
    let f0 = comp(d, 0);
    scaled(f0[0], RealQuaternion::I) + scaled(f0[1], u.iej) + scaled(f0[2], u.e * RealQuaternion::J)
}

/// `ψ^θ rot` of the vector part, from precomputed partials.
pub fn psi_rot_from_partials(theta: f64, d: &[ComplexQuaternion; 3]) -> ComplexQuaternion {
    let u = ThetaUnits::new(theta);
    let f1 = comp(d, 1);
    let f2 = comp(d, 2);
    let f3 = comp(d, 3);
    scaled(-f3[1] - f2[2], u.e) + scaled(-f1[2], u.iej) - scaled(f3[0], RealQuaternion::J)
        + scaled(f2[0], RealQuaternion::K)
        - scaled(f1[1], u.iek)
}

/// `ψ^θ div[f⃗](x)`.
pub fn psi_div<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(psi_div_from_partials(theta, &partials(f, x, scheme)?))
}

/// `ψ^θ grad[f0](x)`.
pub fn psi_grad<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(psi_grad_from_partials(theta, &partials(f, x, scheme)?))
}

/// `ψ^θ rot[f⃗](x)`.
pub fn psi_rot<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(psi_rot_from_partials(theta, &partials(f, x, scheme)?))
}

/// Divergence with conjugated coefficients; enters `D^ψ`.
pub fn conj_psi_div<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(psi_div(theta, f, x, scheme)?.conj())
}

/// Rotation with conjugated coefficients; enters `D^ψ`.
pub fn conj_psi_rot<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    Ok(psi_rot(theta, f, x, scheme)?.conj())
}

/// The four left-hand sides of the generalized Moisil–Teodorescu system,
/// evaluated on the vector part of `f`.
pub fn mt_residual_from_partials(theta: f64, d: &[ComplexQuaternion; 3]) -> [Complex; 4] {
    let (s, c) = theta.sin_cos();
    let f1 = comp(d, 1);
    let f2 = comp(d, 2);
    let f3 = comp(d, 3);
    [
        -f1[0] + (f2[1] - f3[2]) * s - (f3[1] + f2[2]) * c,
        (f3[2] - f2[1]) * c - (f3[1] + f2[2]) * s,
        -f3[0] + f1[2] * s + f1[1] * c,
        f2[0] - f1[2] * c + f1[1] * s,
    ]
}

pub fn mt_residual<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<[Complex; 4]> {
    Ok(mt_residual_from_partials(theta, &partials(f, x, scheme)?))
}

/// `ψD[ψ̄D[f]](x) − Δf(x)`.
pub fn laplacian_check<F: QuaternionField + ?Sized>(
    psi: &StructuralSet,
    f: &F,
    x: Point,
    scheme: DerivativeScheme,
) -> Result<ComplexQuaternion> {
    let h = second_partials(f, x, scheme)?;
    let bar = psi.conj_set();
    let mut out = ComplexQuaternion::ZERO;
    for j in 0..3 {
        for k in 0..3 {
            out += psi.psi[j] * (bar.psi[k] * h[j][k]);
        }
        out -= h[j][j];
    }
    Ok(out)
}

/// Outcome of [`two_sided_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TwoSidedReport {
    /// `max |ψ^θ grad[f0]|` over the samples.
    pub max_psi_grad: f64,
    /// Largest modulus among the four system residuals of `Vec(f)`.
    pub max_mt_residual: f64,
    /// `max |D^ψ[Vec f]|`, reported for cross-checking.
    pub max_right_residual: f64,
    pub tolerance: f64,
    pub two_sided: bool,
}

/// Test whether `f` is both left and right ψ^θ-hyperholomorphic at the
/// samples: this holds iff `f0` is constant and `Vec(f)` solves the system.
pub fn two_sided_check<F: QuaternionField + ?Sized>(
    theta: f64,
    f: &F,
    samples: &[Point],
    scheme: DerivativeScheme,
    tolerance: f64,
) -> Result<TwoSidedReport> {
    let psi = make_psi_theta(theta);
    let mut max_psi_grad: f64 = 0.0;
    let mut max_mt: f64 = 0.0;
    let mut max_right: f64 = 0.0;
    for &x in samples {
        let d = partials(f, x, scheme)?;
        max_psi_grad = max_psi_grad.max(psi_grad_from_partials(theta, &d).norm_c());
        let r = mt_residual_from_partials(theta, &d);
        max_mt = r.iter().fold(max_mt, |m, v| m.max(v.norm()));
        let dv = d.map(ComplexQuaternion::vector_part);
        max_right = max_right.max(right_combine(&psi, &dv).norm_c());
    }
    Ok(TwoSidedReport {
        max_psi_grad,
        max_mt_residual: max_mt,
        max_right_residual: max_right,
        tolerance,
        two_sided: max_psi_grad <= tolerance && max_mt <= tolerance,
    })
}

/// The field `x ↦ ψD[f](x)`. With the analytic scheme the inner gradient is
/// used where available and central differences of step `1e-6` elsewhere;
/// with the central scheme no domain check is made, so the inner field must
/// be defined on the whole stencil.
pub struct PsiDerivativeField {
    pub psi: StructuralSet,
    pub field: SharedField,
    pub scheme: DerivativeScheme,
}

impl QuaternionField for PsiDerivativeField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        let d = match self.scheme {
            DerivativeScheme::Analytic => self
                .field
                .gradient(x)
                .unwrap_or_else(|| partials_unchecked(&self.field, x, 1e-6)),
            DerivativeScheme::Central { h } => partials_unchecked(&self.field, x, h),
        };
        left_combine(&self.psi, &d)
    }
}
