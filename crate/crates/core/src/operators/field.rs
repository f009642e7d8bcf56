//! Quaternion-valued fields on ℝ³.

use std::sync::Arc;

use rand::Rng;

use crate::quaternion::{Complex, ComplexQuaternion};
use crate::{vec3, Point};

/// Region where a field may be evaluated, used to reject finite-difference
/// stencils that would leave it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainHint {
    Everywhere,
    /// Everywhere except one point.
    Punctured { center: Point },
    /// Closed ball.
    Ball { center: Point, radius: f64 },
    /// Complement of an open ball.
    Exterior { center: Point, radius: f64 },
    /// Axis-aligned box.
    Box { min: Point, max: Point },
}

impl DomainHint {
    /// Whether the closed ball of radius `h` around `x` lies in the domain.
    pub fn admits_stencil(&self, x: Point, h: f64) -> bool {
        match *self {
            DomainHint::Everywhere => true,
            DomainHint::Punctured { center } => vec3::dist(x, center) > h,
            DomainHint::Ball { center, radius } => vec3::dist(x, center) + h <= radius,
            DomainHint::Exterior { center, radius } => vec3::dist(x, center) - h >= radius,
            DomainHint::Box { min, max } => (0..3).all(|k| x[k] - h >= min[k] && x[k] + h <= max[k]),
        }
    }
}

/// Evaluatable map ℝ³ → H(C), optionally with analytic derivatives.
///
/// When `gradient` is provided it must agree with central differences of
/// `eval` at rate O(h²).
pub trait QuaternionField: Send + Sync {
    fn eval(&self, x: Point) -> ComplexQuaternion;

    /// `[∂f/∂x1, ∂f/∂x2, ∂f/∂x3]`.
    fn gradient(&self, _x: Point) -> Option<[ComplexQuaternion; 3]> {
        None
    }

    /// `H[j][k] = ∂²f/∂x_j∂x_k`.
    fn hessian(&self, _x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        None
    }

    fn domain(&self) -> DomainHint {
        DomainHint::Everywhere
    }
}

impl<F: QuaternionField + ?Sized> QuaternionField for Arc<F> {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        (**self).eval(x)
    }
    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        (**self).hessian(x)
    }
    fn domain(&self) -> DomainHint {
        (**self).domain()
    }
}

impl<F: QuaternionField + ?Sized> QuaternionField for &F {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        (**self).eval(x)
    }
    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        (**self).hessian(x)
    }
    fn domain(&self) -> DomainHint {
        (**self).domain()
    }
}

pub type SharedField = Arc<dyn QuaternionField>;

#[derive(Clone, Copy, Debug)]
pub struct ConstantField(pub ComplexQuaternion);

impl QuaternionField for ConstantField {
    fn eval(&self, _x: Point) -> ComplexQuaternion {
        self.0
    }
    fn gradient(&self, _x: Point) -> Option<[ComplexQuaternion; 3]> {
        Some([ComplexQuaternion::ZERO; 3])
    }
    fn hessian(&self, _x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        Some([[ComplexQuaternion::ZERO; 3]; 3])
    }
}

type EvalFn = dyn Fn(Point) -> ComplexQuaternion + Send + Sync;
type GradFn = dyn Fn(Point) -> [ComplexQuaternion; 3] + Send + Sync;

/// Field backed by closures.
pub struct FnField {
    eval: Box<EvalFn>,
    grad: Option<Box<GradFn>>,
    domain: DomainHint,
}

impl FnField {
    pub fn new(eval: impl Fn(Point) -> ComplexQuaternion + Send + Sync + 'static) -> Self {
        Self {
            eval: Box::new(eval),
            grad: None,
            domain: DomainHint::Everywhere,
        }
    }

    pub fn with_gradient(
        mut self,
        grad: impl Fn(Point) -> [ComplexQuaternion; 3] + Send + Sync + 'static,
    ) -> Self {
        self.grad = Some(Box::new(grad));
        self
    }

    pub fn with_domain(mut self, domain: DomainHint) -> Self {
        self.domain = domain;
        self
    }
}

impl QuaternionField for FnField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        (self.eval)(x)
    }
    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        self.grad.as_ref().map(|g| g(x))
    }
    fn domain(&self) -> DomainHint {
        self.domain
    }
}

/// One term `coeff · x1^p1 x2^p2 x3^p3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: ComplexQuaternion,
    pub powers: [u32; 3],
}

/// Quaternion-valued polynomial with exact derivatives of every order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

fn pow_derivative(x: f64, p: u32, order: u32) -> f64 {
    if order > p {
        return 0.0;
    }
    let mut factor = 1.0;
    for m in 0..order {
        factor *= (p - m) as f64;
    }
    factor * x.powi((p - order) as i32)
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Self { terms }
    }

    pub fn term(mut self, coeff: ComplexQuaternion, powers: [u32; 3]) -> Self {
        self.terms.push(Monomial { coeff, powers });
        self
    }

    /// Random polynomial of total degree at most `degree` with coefficients
    /// uniform in `[-1, 1]` (real and imaginary parts).
    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        let mut terms = Vec::new();
        for a in 0..=degree {
            for b in 0..=(degree - a) {
                for c in 0..=(degree - a - b) {
                    let coeff = ComplexQuaternion(std::array::from_fn(|_| {
                        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    }));
                    terms.push(Monomial {
                        coeff,
                        powers: [a, b, c],
                    });
                }
            }
        }
        Self { terms }
    }

    /// Same as [`Polynomial::random`] with zero scalar coefficients.
    pub fn random_vector<R: Rng>(rng: &mut R, degree: u32) -> Self {
        let mut p = Self::random(rng, degree);
        for t in &mut p.terms {
            t.coeff = t.coeff.vector_part();
        }
        p
    }

    fn eval_derivative(&self, x: Point, order: [u32; 3]) -> ComplexQuaternion {
        let mut out = ComplexQuaternion::ZERO;
        for t in &self.terms {
            let w = (0..3)
                .map(|k| pow_derivative(x[k], t.powers[k], order[k]))
                .product::<f64>();
            if w != 0.0 {
                out += t.coeff * w;
            }
        }
        out
    }
}

impl QuaternionField for Polynomial {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        self.eval_derivative(x, [0, 0, 0])
    }

    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        Some(std::array::from_fn(|k| {
            let mut o = [0; 3];
            o[k] = 1;
            self.eval_derivative(x, o)
        }))
    }

    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        Some(std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let mut o = [0; 3];
                o[j] += 1;
                o[k] += 1;
                self.eval_derivative(x, o)
            })
        }))
    }
}

/// Pointwise sum of fields; derivatives are available when every summand
/// provides them.
pub struct SumField(pub Vec<SharedField>);

impl QuaternionField for SumField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        self.0.iter().map(|f| f.eval(x)).sum()
    }

    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        let mut out = [ComplexQuaternion::ZERO; 3];
        for f in &self.0 {
            let g = f.gradient(x)?;
            for k in 0..3 {
                out[k] += g[k];
            }
        }
        Some(out)
    }

    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        let mut out = [[ComplexQuaternion::ZERO; 3]; 3];
        for f in &self.0 {
            let h = f.hessian(x)?;
            for j in 0..3 {
                for k in 0..3 {
                    out[j][k] += h[j][k];
                }
            }
        }
        Some(out)
    }

    fn domain(&self) -> DomainHint {
        // The first restricted summand wins; mixed restrictions are not tracked.
        self.0
            .iter()
            .map(|f| f.domain())
            .find(|d| *d != DomainHint::Everywhere)
            .unwrap_or(DomainHint::Everywhere)
    }
}

/// `factor · f` for a complex scalar factor.
pub struct ScaledField {
    pub field: SharedField,
    pub factor: Complex,
}

impl QuaternionField for ScaledField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        self.field.eval(x) * self.factor
    }
    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        self.field.gradient(x).map(|g| g.map(|q| q * self.factor))
    }
    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        self.field
            .hessian(x)
            .map(|h| h.map(|row| row.map(|q| q * self.factor)))
    }
    fn domain(&self) -> DomainHint {
        self.field.domain()
    }
}

/// Samples on a regular grid, evaluated by trilinear interpolation.
///
/// Derivatives of the interpolant are piecewise constant along each axis, so
/// finite differences of a grid field are only first-order accurate.
#[derive(Clone, Debug)]
pub struct GridField {
    pub origin: Point,
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    /// Row-major with `x1` fastest.
    pub values: Vec<ComplexQuaternion>,
}

impl GridField {
    pub fn new(
        origin: Point,
        spacing: [f64; 3],
        dims: [usize; 3],
        values: Vec<ComplexQuaternion>,
    ) -> crate::Result<Self> {
        if dims.iter().any(|&d| d < 2) || spacing.iter().any(|&s| !(s > 0.0)) {
            return Err(crate::Error::InvalidParameter(
                "grid needs at least two samples and positive spacing per axis".into(),
            ));
        }
        if values.len() != dims[0] * dims[1] * dims[2] {
            return Err(crate::Error::InvalidParameter(format!(
                "grid expects {} samples, got {}",
                dims[0] * dims[1] * dims[2],
                values.len()
            )));
        }
        Ok(Self {
            origin,
            spacing,
            dims,
            values,
        })
    }

    fn at(&self, i: usize, j: usize, k: usize) -> ComplexQuaternion {
        self.values[i + self.dims[0] * (j + self.dims[1] * k)]
    }

    pub fn upper_corner(&self) -> Point {
        std::array::from_fn(|k| self.origin[k] + self.spacing[k] * (self.dims[k] - 1) as f64)
    }
}

impl QuaternionField for GridField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        let mut idx = [0usize; 3];
        let mut t = [0.0; 3];
        for k in 0..3 {
            let s = ((x[k] - self.origin[k]) / self.spacing[k]).clamp(0.0, (self.dims[k] - 1) as f64);
            let i = (s.floor() as usize).min(self.dims[k] - 2);
            idx[k] = i;
            t[k] = s - i as f64;
        }
        let mut out = ComplexQuaternion::ZERO;
        for corner in 0..8 {
            let o = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
            let w: f64 = (0..3)
                .map(|k| if o[k] == 1 { t[k] } else { 1.0 - t[k] })
                .product();
            if w != 0.0 {
                out += self.at(idx[0] + o[0], idx[1] + o[1], idx[2] + o[2]) * w;
            }
        }
        out
    }

    fn domain(&self) -> DomainHint {
        DomainHint::Box {
            min: self.origin,
            max: self.upper_corner(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stencil_admission() {
        let ball = DomainHint::Ball {
            center: [0.0; 3],
            radius: 1.0,
        };
        assert!(ball.admits_stencil([0.5, 0.0, 0.0], 0.1));
        assert!(!ball.admits_stencil([0.95, 0.0, 0.0], 0.1));
        let p = DomainHint::Punctured { center: [0.0; 3] };
        assert!(!p.admits_stencil([1e-5, 0.0, 0.0], 1e-4));
        let ext = DomainHint::Exterior {
            center: [0.0; 3],
            radius: 1.0,
        };
        assert!(ext.admits_stencil([2.0, 0.0, 0.0], 0.5));
        assert!(!ext.admits_stencil([1.2, 0.0, 0.0], 0.5));
    }

    #[test]
    fn polynomial_derivatives_match_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = Polynomial::random(&mut rng, 3);
        let x = [0.3, -0.2, 0.7];
        let h = 1e-5;
        let g = p.gradient(x).unwrap();
        for k in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let fd = (p.eval(xp) - p.eval(xm)) / (2.0 * h);
            assert!(fd.max_abs_diff(g[k]) < 1e-8);
        }
        let hs = p.hessian(x).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(hs[j][k], hs[k][j]);
            }
        }
    }

    #[test]
    fn grid_reproduces_trilinear_functions() {
        // f = 1 + 2x - y + 3xz is reproduced exactly by trilinear interpolation.
        let f = |x: Point| 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[2];
        let dims = [4, 3, 5];
        let spacing = [0.5, 0.25, 0.2];
        let origin = [-1.0, 0.0, 0.1];
        let mut values = Vec::new();
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    let x = [
                        origin[0] + i as f64 * spacing[0],
                        origin[1] + j as f64 * spacing[1],
                        origin[2] + k as f64 * spacing[2],
                    ];
                    values.push(ComplexQuaternion::from_real([f(x), 0.0, 0.0, 0.0]));
                }
            }
        }
        let g = GridField::new(origin, spacing, dims, values).unwrap();
        let x = [-0.3, 0.33, 0.45];
        assert!((g.eval(x).scalar().re - f(x)).abs() < 1e-13);
        assert!(GridField::new(origin, spacing, dims, vec![]).is_err());
    }
}
