//! Classical systems contained in the generalized Moisil–Teodorescu system
//! for particular angles, and the component maps that carry solutions over.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::{partials, DerivativeScheme, QuaternionField, SharedField};
use crate::quaternion::{Complex, ComplexQuaternion};
use crate::{Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialCase {
    /// `div f = 0, rot f = 0` at θ = 0.
    DivRot,
    /// Homogeneous Cimmino system at θ = π/2.
    Cimmino,
    /// Riesz system at θ = π.
    Riesz,
    /// The system obtained at θ = 3π/2.
    ThreeHalvesPi,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 4] = [
        SpecialCase::DivRot,
        SpecialCase::Cimmino,
        SpecialCase::Riesz,
        SpecialCase::ThreeHalvesPi,
    ];

    pub fn theta(self) -> f64 {
        match self {
            SpecialCase::DivRot => 0.0,
            SpecialCase::Cimmino => FRAC_PI_2,
            SpecialCase::Riesz => PI,
            SpecialCase::ThreeHalvesPi => 3.0 * FRAC_PI_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecialCase::DivRot => "div-rot",
            SpecialCase::Cimmino => "cimmino",
            SpecialCase::Riesz => "riesz",
            SpecialCase::ThreeHalvesPi => "theta-3pi/2",
        }
    }

    pub fn theta_label(self) -> &'static str {
        match self {
            SpecialCase::DivRot => "0",
            SpecialCase::Cimmino => "pi/2",
            SpecialCase::Riesz => "pi",
            SpecialCase::ThreeHalvesPi => "3pi/2",
        }
    }

    /// Image of `f1 i + f2 j + f3 k` under the component map.
    pub fn map_description(self) -> &'static str {
        match self {
            SpecialCase::DivRot => "f1 i + f3 j + f2 k",
            SpecialCase::Riesz => "f1 + f3 i + f2 j",
            SpecialCase::Cimmino | SpecialCase::ThreeHalvesPi => "f1 i + f2 j + f3 k",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s.trim()))
    }

    /// Apply the component map to one value; the scalar part of the input
    /// is ignored.
    pub fn map_value(self, q: ComplexQuaternion) -> ComplexQuaternion {
        let [_, f1, f2, f3] = q.0;
        let z = Complex::new(0.0, 0.0);
        match self {
            SpecialCase::DivRot => ComplexQuaternion::new(z, f1, f3, f2),
            SpecialCase::Riesz => ComplexQuaternion::new(f1, f3, f2, z),
            SpecialCase::Cimmino | SpecialCase::ThreeHalvesPi => ComplexQuaternion::new(z, f1, f2, f3),
        }
    }

    /// Residuals of the classical system for a field already in mapped
    /// form.
    ///
    /// * div-rot: `[div h, rot₁ h, rot₂ h, rot₃ h]` of `h = h1 i + h2 j + h3 k`.
    /// * Cimmino and θ = 3π/2: the four displayed equations in their own form.
    /// * Riesz: `h = h0 + h1 i + h2 j` in coordinates `(x0, x1, x2) = (x1, x2, x3)`,
    ///   residuals `[∂0h0 − ∂1h1 − ∂2h2, ∂1h0 + ∂0h1, ∂2h0 + ∂0h2, ∂2h1 − ∂1h2]`.
    pub fn classical_residuals<F: QuaternionField + ?Sized>(
        self,
        mapped: &F,
        x: Point,
        scheme: DerivativeScheme,
    ) -> Result<[Complex; 4]> {
        let d = partials(mapped, x, scheme)?;
        // p(m, k) = ∂h_m/∂x_k with k counted from 1.
        let p = |m: usize, k: usize| d[k - 1].0[m];
        Ok(match self {
            SpecialCase::DivRot => [
                p(1, 1) + p(2, 2) + p(3, 3),
                p(3, 2) - p(2, 3),
                p(1, 3) - p(3, 1),
                p(2, 1) - p(1, 2),
            ],
            SpecialCase::Cimmino => [
                -p(1, 1) + p(2, 2) - p(3, 3),
                -p(3, 2) - p(2, 3),
                -p(3, 1) + p(1, 3),
                p(2, 1) + p(1, 2),
            ],
            SpecialCase::ThreeHalvesPi => [
                -p(1, 1) - p(2, 2) + p(3, 3),
                p(3, 2) + p(2, 3),
                -p(3, 1) - p(1, 3),
                p(2, 1) - p(1, 2),
            ],
            SpecialCase::Riesz => [
                p(0, 1) - p(1, 2) - p(2, 3),
                p(0, 2) + p(1, 1),
                p(0, 3) + p(2, 1),
                p(1, 3) - p(2, 2),
            ],
        })
    }
}

/// A field pushed through a special-case component map. The map is linear,
/// so analytic derivatives carry over.
pub struct MappedField {
    pub case: SpecialCase,
    pub inner: SharedField,
}

impl QuaternionField for MappedField {
    fn eval(&self, x: Point) -> ComplexQuaternion {
        self.case.map_value(self.inner.eval(x))
    }
    fn gradient(&self, x: Point) -> Option<[ComplexQuaternion; 3]> {
        self.inner.gradient(x).map(|g| g.map(|q| self.case.map_value(q)))
    }
    fn hessian(&self, x: Point) -> Option<[[ComplexQuaternion; 3]; 3]> {
        self.inner
            .hessian(x)
            .map(|h| h.map(|row| row.map(|q| self.case.map_value(q))))
    }
    fn domain(&self) -> super::DomainHint {
        self.inner.domain()
    }
}

/// `(θ, mapped field)` for a special case.
pub fn special_case_map(case: SpecialCase, f: SharedField) -> (f64, MappedField) {
    (case.theta(), MappedField { case, inner: f })
}

/// One row of the special-case table.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialCaseRow {
    pub name: &'static str,
    pub theta: &'static str,
    pub theta_value: f64,
    pub map: &'static str,
}

pub fn list_special_cases() -> Vec<SpecialCaseRow> {
    SpecialCase::ALL
        .into_iter()
        .map(|c| SpecialCaseRow {
            name: c.name(),
            theta: c.theta_label(),
            theta_value: c.theta(),
            map: c.map_description(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{mt_residual, ConstantField, Polynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn div_rot_example() {
        let one = Complex::new(1.0, 0.0);
        let z = Complex::new(0.0, 0.0);
        let sol = Polynomial::default()
            .term(ComplexQuaternion::new(z, one, z, z), [0, 1, 0])
            .term(ComplexQuaternion::new(z, z, z, one), [1, 0, 0]);
        let (theta, mapped) = special_case_map(SpecialCase::DivRot, Arc::new(sol));
        assert_eq!(theta, 0.0);
        let v = mapped.eval([0.5, 2.0, 0.0]);
        assert_eq!(v, ComplexQuaternion::new(z, Complex::new(2.0, 0.0), Complex::new(0.5, 0.0), z));
        let r = SpecialCase::DivRot
            .classical_residuals(&mapped, [0.1, 0.2, 0.3], DerivativeScheme::Analytic)
            .unwrap();
        assert!(r.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn zero_maps_to_zero() {
        for case in SpecialCase::ALL {
            let (_, m) = special_case_map(case, Arc::new(ConstantField(ComplexQuaternion::ZERO)));
            assert_eq!(m.eval([1.0, 2.0, 3.0]), ComplexQuaternion::ZERO);
        }
    }

    #[test]
    fn classical_systems_match_general_system() {
        // Each classical residual vector is a fixed signed permutation of the
        // general residual at the case's angle.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = DerivativeScheme::Analytic;
        for _ in 0..10 {
            let p: SharedField = Arc::new(Polynomial::random_vector(&mut rng, 2));
            let x = [0.2, -0.3, 0.5];
            for case in SpecialCase::ALL {
                let (theta, m) = special_case_map(case, p.clone());
                let e = mt_residual(theta, &p, x, a).unwrap();
                let r = case.classical_residuals(&m, x, a).unwrap();
                let expected = match case {
                    SpecialCase::DivRot => [-e[0], -e[1], -e[3], -e[2]],
                    SpecialCase::Cimmino | SpecialCase::ThreeHalvesPi => e,
                    SpecialCase::Riesz => [-e[0], -e[2], e[3], -e[1]],
                };
                for k in 0..4 {
                    assert!((r[k] - expected[k]).norm() < 1e-12, "{case:?} eq {k}");
                }
            }
        }
    }

    #[test]
    fn table() {
        let rows = list_special_cases();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].map, "f1 i + f3 j + f2 k");
        assert_eq!(SpecialCase::parse("Riesz"), Some(SpecialCase::Riesz));
    }
}
