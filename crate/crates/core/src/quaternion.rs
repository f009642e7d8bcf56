//! Real and complex quaternions.
//!
//! A complex quaternion `a0 + a1 i + a2 j + a3 k` has complex coefficients; the
//! complex unit commutes with the quaternionic units, so `H(C)` is an
//! associative algebra with zero divisors. Real quaternions embed with zero
//! imaginary parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::{Error, Result};

pub type Complex = Complex64;

/// Default zero-divisor threshold for [`ComplexQuaternion::inverse`],
/// relative to `norm_c(a)^2`.
pub const ZERO_DIVISOR_THRESHOLD: f64 = 1e-12;

/// Absolute tolerance on `|Sc(a)|` below which `a` counts as a pure vector.
pub const PURE_VECTOR_TOL: f64 = 1e-14;

const CZERO: Complex = Complex::new(0.0, 0.0);

/// Quaternion with real coefficients `[a0, a1, a2, a3]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RealQuaternion(pub [f64; 4]);

impl RealQuaternion {
    pub const ZERO: Self = Self([0.0; 4]);
    pub const ONE: Self = Self([1.0, 0.0, 0.0, 0.0]);
    pub const I: Self = Self([0.0, 1.0, 0.0, 0.0]);
    pub const J: Self = Self([0.0, 0.0, 1.0, 0.0]);
    pub const K: Self = Self([0.0, 0.0, 0.0, 1.0]);

    pub const fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        Self([a0, a1, a2, a3])
    }

    /// Pure vector `v1 i + v2 j + v3 k`.
    pub const fn vector(v: [f64; 3]) -> Self {
        Self([0.0, v[0], v[1], v[2]])
    }

    pub fn scalar(self) -> f64 {
        self.0[0]
    }

    pub fn vector_part(self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn conj(self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        Self([a0, -a1, -a2, -a3])
    }

    /// Euclidean norm `sqrt(a conj(a))`.
    pub fn norm(self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn complexify(self) -> ComplexQuaternion {
        ComplexQuaternion(self.0.map(|c| Complex::new(c, 0.0)))
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for RealQuaternion {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = b.0;
        Self([
            a0 * b0 - (a1 * b1 + a2 * b2 + a3 * b3),
            a0 * b1 + b0 * a1 + (a2 * b3 - a3 * b2),
            a0 * b2 + b0 * a2 + (a3 * b1 - a1 * b3),
            a0 * b3 + b0 * a3 + (a1 * b2 - a2 * b1),
        ])
    }
}

impl Add for RealQuaternion {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + b.0[i]))
    }
}

impl Sub for RealQuaternion {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - b.0[i]))
    }
}

impl Neg for RealQuaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<f64> for RealQuaternion {
    type Output = Self;

    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl Mul<ComplexQuaternion> for RealQuaternion {
    type Output = ComplexQuaternion;

    fn mul(self, b: ComplexQuaternion) -> ComplexQuaternion {
        self.complexify() * b
    }
}

impl Mul<RealQuaternion> for ComplexQuaternion {
    type Output = ComplexQuaternion;

    fn mul(self, b: RealQuaternion) -> ComplexQuaternion {
        self * b.complexify()
    }
}

impl From<RealQuaternion> for ComplexQuaternion {
    fn from(q: RealQuaternion) -> Self {
        q.complexify()
    }
}

/// Element of `H(C)`, stored as four complex coefficients `[a0, a1, a2, a3]`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct ComplexQuaternion(pub [Complex; 4]);

impl fmt::Debug for ComplexQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = self.0;
        write!(f, "({a0}) + ({a1})i + ({a2})j + ({a3})k")
    }
}

/// Serialized as eight reals `[re a0, im a0, …, re a3, im a3]`.
impl Serialize for ComplexQuaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(8))?;
        for c in &self.0 {
            seq.serialize_element(&c.re)?;
            seq.serialize_element(&c.im)?;
        }
        seq.end()
    }
}

impl ComplexQuaternion {
    pub const ZERO: Self = Self([CZERO; 4]);
    pub const ONE: Self = Self([Complex::new(1.0, 0.0), CZERO, CZERO, CZERO]);
    pub const I: Self = Self([CZERO, Complex::new(1.0, 0.0), CZERO, CZERO]);
    pub const J: Self = Self([CZERO, CZERO, Complex::new(1.0, 0.0), CZERO]);
    pub const K: Self = Self([CZERO, CZERO, CZERO, Complex::new(1.0, 0.0)]);

    pub const fn new(a0: Complex, a1: Complex, a2: Complex, a3: Complex) -> Self {
        Self([a0, a1, a2, a3])
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        RealQuaternion(c).complexify()
    }

    pub fn from_scalar(s: Complex) -> Self {
        Self([s, CZERO, CZERO, CZERO])
    }

    pub fn from_vector(v: [Complex; 3]) -> Self {
        Self([CZERO, v[0], v[1], v[2]])
    }

    /// Split `a = alpha1 + i alpha2` into its real quaternion parts.
    pub fn real_pair(self) -> (RealQuaternion, RealQuaternion) {
        (
            RealQuaternion(self.0.map(|c| c.re)),
            RealQuaternion(self.0.map(|c| c.im)),
        )
    }

    pub fn scalar(self) -> Complex {
        self.0[0]
    }

    /// `Sc(a)` as a quaternion.
    pub fn scalar_part(self) -> Self {
        Self::from_scalar(self.0[0])
    }

    /// `Vec(a)` as a quaternion.
    pub fn vector_part(self) -> Self {
        Self([CZERO, self.0[1], self.0[2], self.0[3]])
    }

    pub fn vector_components(self) -> [Complex; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn conj(self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        Self([a0, -a1, -a2, -a3])
    }

    /// Quaternionic norm `|a|_c`: root of the summed squared complex moduli.
    pub fn norm_c(self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_pure_vector(self, tol: f64) -> bool {
        self.0[0].norm() <= tol
    }

    /// Inverse `conj(a) / (a conj(a))` with the default threshold.
    pub fn inverse(self) -> Result<Self> {
        self.inverse_with_threshold(ZERO_DIVISOR_THRESHOLD)
    }

    /// Inverse, reporting [`Error::ZeroDivisor`] when `|a conj(a)|` falls
    /// below `threshold * norm_c(a)^2`.
    pub fn inverse_with_threshold(self, threshold: f64) -> Result<Self> {
        // a conj(a) = a0^2 + a1^2 + a2^2 + a3^2 (complex squares, not moduli).
        let q: Complex = self.0.iter().map(|c| c * c).sum();
        let scale = self.norm_c().powi(2);
        if scale == 0.0 || q.norm() <= threshold * scale {
            return Err(Error::ZeroDivisor {
                modulus: q.norm(),
                scale,
            });
        }
        let inv = q.inv();
        Ok(Self(self.conj().0.map(|c| c * inv)))
    }

    /// `<a, b>` of two pure vectors.
    pub fn dot(self, b: Self) -> Result<Complex> {
        self.require_pure()?;
        b.require_pure()?;
        Ok(self.vec_dot(b))
    }

    /// `[a, b]` of two pure vectors.
    pub fn cross(self, b: Self) -> Result<Self> {
        self.require_pure()?;
        b.require_pure()?;
        Ok(self.vec_cross(b))
    }

    /// `<Vec a, Vec b>`, ignoring scalar parts.
    pub fn vec_dot(self, b: Self) -> Complex {
        self.0[1] * b.0[1] + self.0[2] * b.0[2] + self.0[3] * b.0[3]
    }

    /// `[Vec a, Vec b]`, ignoring scalar parts.
    pub fn vec_cross(self, b: Self) -> Self {
        let [_, a1, a2, a3] = self.0;
        let [_, b1, b2, b3] = b.0;
        Self([CZERO, a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    fn require_pure(self) -> Result<()> {
        if self.is_pure_vector(PURE_VECTOR_TOL) {
            Ok(())
        } else {
            Err(Error::NotPureVector {
                scalar: self.0[0].norm(),
            })
        }
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eight reals `re a0, im a0, ..., re a3, im a3`.
    pub fn to_reals(self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, c) in self.0.iter().enumerate() {
            out[2 * k] = c.re;
            out[2 * k + 1] = c.im;
        }
        out
    }
}

impl Mul for ComplexQuaternion {
    type Output = Self;

    /// `a0 b0 - <a, b> + a0 b + b0 a + [a, b]`.
    fn mul(self, b: Self) -> Self {
        let a0 = self.0[0];
        let b0 = b.0[0];
        let dot = self.vec_dot(b);
        let cross = self.vec_cross(b);
        Self([
            a0 * b0 - dot,
            a0 * b.0[1] + b0 * self.0[1] + cross.0[1],
            a0 * b.0[2] + b0 * self.0[2] + cross.0[2],
            a0 * b.0[3] + b0 * self.0[3] + cross.0[3],
        ])
    }
}

impl Add for ComplexQuaternion {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + b.0[i]))
    }
}

impl AddAssign for ComplexQuaternion {
    fn add_assign(&mut self, b: Self) {
        for i in 0..4 {
            self.0[i] += b.0[i];
        }
    }
}

impl Sub for ComplexQuaternion {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - b.0[i]))
    }
}

impl SubAssign for ComplexQuaternion {
    fn sub_assign(&mut self, b: Self) {
        for i in 0..4 {
            self.0[i] -= b.0[i];
        }
    }
}

impl Neg for ComplexQuaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<Complex> for ComplexQuaternion {
    type Output = Self;

    fn mul(self, s: Complex) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl Mul<f64> for ComplexQuaternion {
    type Output = Self;

    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl Div<f64> for ComplexQuaternion {
    type Output = Self;

    fn div(self, s: f64) -> Self {
        Self(self.0.map(|c| c / s))
    }
}

impl std::iter::Sum for ComplexQuaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

impl RealQuaternion {
    /// Components uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }
}

impl ComplexQuaternion {
    /// Real and imaginary parts uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self(std::array::from_fn(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
    }
}

/// Worst-case deviations found by [`algebra_suite`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlgebraReport {
    pub samples: usize,
    pub seed: u64,
    /// `max |(ab)c − a(bc)|` over complex triples.
    pub associativity: f64,
    /// `max |conj(ab) − conj(b) conj(a)|`.
    pub conjugation: f64,
    /// `max |norm_r(ab) − norm_r(a) norm_r(b)|` over real pairs, together
    /// with `|norm_c(ab) − norm_r(a) norm_c(b)|` for real `a`, complex `b`.
    pub norm: f64,
    /// `max |a a⁻¹ − 1|` over samples with `|a ā| ≥ norm_c(a)²/10`, away
    /// from the zero divisors where the inverse is ill-conditioned.
    pub inverse: f64,
}

impl AlgebraReport {
    pub fn max_error(&self) -> f64 {
        self.associativity.max(self.conjugation).max(self.norm).max(self.inverse)
    }
}

/// Check the algebra laws on `samples` seeded random quaternions.
pub fn algebra_suite(seed: u64, samples: usize) -> AlgebraReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AlgebraReport {
        samples,
        seed,
        associativity: 0.0,
        conjugation: 0.0,
        norm: 0.0,
        inverse: 0.0,
    };
    for _ in 0..samples {
        let a = ComplexQuaternion::random(&mut rng);
        let b = ComplexQuaternion::random(&mut rng);
        let c = ComplexQuaternion::random(&mut rng);
        report.associativity = report.associativity.max(((a * b) * c).max_abs_diff(a * (b * c)));
        report.conjugation = report.conjugation.max((a * b).conj().max_abs_diff(b.conj() * a.conj()));
        let ra = RealQuaternion::random(&mut rng);
        let rb = RealQuaternion::random(&mut rng);
        report.norm = report
            .norm
            .max(((ra * rb).norm() - ra.norm() * rb.norm()).abs())
            .max(((ra * b).norm_c() - ra.norm() * b.norm_c()).abs());
        let well_conditioned = (a * a.conj()).scalar().norm() >= 0.1 * a.norm_c().powi(2);
        if let (true, Ok(inv)) = (well_conditioned, a.inverse()) {
            report.inverse = report.inverse.max((a * inv).max_abs_diff(ComplexQuaternion::ONE));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn unit_products() {
        assert_eq!(ComplexQuaternion::I * ComplexQuaternion::J, ComplexQuaternion::K);
        assert_eq!(ComplexQuaternion::J * ComplexQuaternion::K, ComplexQuaternion::I);
        assert_eq!(ComplexQuaternion::K * ComplexQuaternion::I, ComplexQuaternion::J);
        assert_eq!(ComplexQuaternion::J * ComplexQuaternion::I, -ComplexQuaternion::K);
        assert_eq!(ComplexQuaternion::I * ComplexQuaternion::I, -ComplexQuaternion::ONE);
    }

    #[test]
    fn one_plus_i_times_j() {
        let a = ComplexQuaternion::ONE + ComplexQuaternion::I;
        assert_eq!(a * ComplexQuaternion::J, ComplexQuaternion::J + ComplexQuaternion::K);
    }

    #[test]
    fn conjugates() {
        assert_eq!(ComplexQuaternion::I.conj(), -ComplexQuaternion::I);
        let a = ComplexQuaternion::from_real([2.0, 0.0, 3.0, 0.0]);
        assert_eq!(a.conj(), ComplexQuaternion::from_real([2.0, 0.0, -3.0, 0.0]));
    }

    #[test]
    fn norm_of_j_plus_complex_k() {
        let a = ComplexQuaternion::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        assert!((a.norm_c() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(RealQuaternion::ONE.norm(), 1.0);
    }

    #[test]
    fn inverses() {
        assert_eq!(ComplexQuaternion::I.inverse().unwrap(), -ComplexQuaternion::I);
        let two = ComplexQuaternion::from_scalar(c(2.0, 0.0));
        assert_eq!(two.inverse().unwrap(), ComplexQuaternion::from_scalar(c(0.5, 0.0)));
        // (1 + i·i) conj = 1 + (i)^2 = 0: a zero divisor.
        let zd = ComplexQuaternion::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(zd.inverse(), Err(Error::ZeroDivisor { .. })));
        assert!(matches!(ComplexQuaternion::ZERO.inverse(), Err(Error::ZeroDivisor { .. })));
    }

    #[test]
    fn dot_and_cross() {
        assert_eq!(ComplexQuaternion::I.cross(ComplexQuaternion::J).unwrap(), ComplexQuaternion::K);
        assert_eq!(ComplexQuaternion::I.dot(ComplexQuaternion::I).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            ComplexQuaternion::ONE.dot(ComplexQuaternion::I),
            Err(Error::NotPureVector { .. })
        ));
    }

    #[test]
    fn real_pair_split() {
        let a = ComplexQuaternion::new(c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5));
        let (r, i) = a.real_pair();
        assert_eq!(r, RealQuaternion::new(1.0, 0.0, 3.0, 0.5));
        assert_eq!(i, RealQuaternion::new(2.0, -1.0, 0.0, 0.5));
        let n2 = r.norm().powi(2) + i.norm().powi(2);
        assert!((a.norm_c().powi(2) - n2).abs() < 1e-14);
    }
}
