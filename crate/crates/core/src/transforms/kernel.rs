use std::f64::consts::PI;

use crate::operators::{DomainHint, QuaternionField};
use crate::quaternion::{ComplexQuaternion, RealQuaternion};
use crate::structural::StructuralSet;
use crate::{vec3, Error, Point, Result};

/// `K_ψ(x) = (x)_ψ / (4π|x|³)`.
pub fn cauchy_kernel(psi: &StructuralSet, x: Point) -> Result<RealQuaternion> {
    let r2 = vec3::dot(x, x);
    if r2 == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(kernel_unchecked(psi, x, r2))
}

#[inline]
pub(crate) fn kernel_unchecked(psi: &StructuralSet, x: Point, r2: f64) -> RealQuaternion {
    let r3 = r2 * r2.sqrt();
    psi.embed(vec3::scale(x, 1.0 / (4.0 * PI * r3)))
}

/// `(1/4π) ∫ (x−ξ)/|x−ξ|³` contributions are accumulated as plain vectors and
/// embedded once; this converts such a vector to the kernel quaternion.
#[inline]
pub(crate) fn embed_scaled(psi: &StructuralSet, v: Point) -> RealQuaternion {
    psi.embed(vec3::scale(v, 1.0 / (4.0 * PI)))
}

/// The field `x ↦ K_ψ(x − a)`, with analytic first and second derivatives.
#[derive(Clone, Copy, Debug)]
pub struct KernelField {
    pub psi: StructuralSet,
    pub center: Point,
}

impl KernelField {
    pub fn new(psi: StructuralSet, center: Point) -> Self {
        Self { psi, center }
    }
}

impl QuaternionField for KernelField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        let d = vec3::sub(x, self.center);
        kernel_unchecked(&self.psi, d, vec3::dot(d, d)).complexify()
    }

    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        let d = vec3::sub(x, self.center);
        let r2 = vec3::dot(d, d);
        if r2 == 0.0 {
            return None;
        }
        let r = r2.sqrt();
        let c = 1.0 / (4.0 * PI);
        let emb = self.psi.embed(d);
        Some(std::array::from_fn(|k| {
            ((self.psi.psi[k] * (1.0 / (r2 * r)) - emb * (3.0 * d[k] / (r2 * r2 * r))) * c).complexify()
        }))
    }

    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        let d = vec3::sub(x, self.center);
        let r2 = vec3::dot(d, d);
        if r2 == 0.0 {
            return None;
        }
        let r = r2.sqrt();
        let r5 = r2 * r2 * r;
        let r7 = r5 * r2;
        let c = 1.0 / (4.0 * PI);
        let emb = self.psi.embed(d);
        Some(std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let delta = if j == k { 1.0 } else { 0.0 };
                let v = self.psi.psi[k] * (-3.0 * d[j] / r5)
                    + self.psi.psi[j] * (-3.0 * d[k] / r5)
                    + emb * (15.0 * d[j] * d[k] / r7 - 3.0 * delta / r5);
                (v * c).complexify()
            })
        }))
    }

    fn domain(&self) -> DomainHint {
        DomainHint::Punctured { center: self.center }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{apply_d_psi, apply_psi_d, partials, DerivativeScheme};
    use crate::structural::make_psi_theta;

    #[test]
    fn examples() {
        for theta in [0.0, 1.0, 4.0] {
            let k = cauchy_kernel(&make_psi_theta(theta), [1.0, 0.0, 0.0]).unwrap();
            assert!(k.max_abs_diff(RealQuaternion::I * (1.0 / (4.0 * PI))) < 1e-16);
        }
        let k = cauchy_kernel(&make_psi_theta(0.0), [0.0, 0.0, 2.0]).unwrap();
        assert!(k.max_abs_diff(RealQuaternion::J * (1.0 / (16.0 * PI))) < 1e-16);
        let k = cauchy_kernel(&make_psi_theta(0.3), [0.3, -1.0, 2.0]).unwrap();
        let r2 = 0.09 + 1.0 + 4.0;
        assert!((k.norm() - 1.0 / (4.0 * PI * r2)).abs() < 1e-16);
        assert!(matches!(cauchy_kernel(&make_psi_theta(0.0), [0.0; 3]), Err(Error::SingularPoint)));
    }

    #[test]
    fn analytic_derivatives() {
        let f = KernelField::new(make_psi_theta(0.8), [0.1, 0.2, -0.3]);
        let x = [0.7, -0.4, 0.5];
        let a = partials(&f, x, DerivativeScheme::Analytic).unwrap();
        let c = partials(&f, x, DerivativeScheme::Central { h: 1e-5 }).unwrap();
        for k in 0..3 {
            assert!(a[k].max_abs_diff(c[k]) < 1e-8);
        }
        let h = f.hessian(x).unwrap();
        let step = 1e-5;
        for j in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += step;
            xm[j] -= step;
            let gp = f.gradient(xp).unwrap();
            let gm = f.gradient(xm).unwrap();
            for k in 0..3 {
                assert!(h[j][k].max_abs_diff((gp[k] - gm[k]) / (2.0 * step)) < 1e-7);
            }
        }
        let psi = make_psi_theta(0.8);
        assert!(apply_psi_d(&psi, &f, x, DerivativeScheme::Analytic).unwrap().norm_c() < 1e-14);
        assert!(apply_d_psi(&psi, &f, x, DerivativeScheme::Analytic).unwrap().norm_c() < 1e-14);
    }
}
