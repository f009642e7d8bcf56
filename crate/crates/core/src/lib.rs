//! Numerical toolkit for ψ^θ-hyperholomorphic function theory in ℝ³.
//!
//! The crate provides complex-quaternion arithmetic, the structural sets ψ^θ
//! and their Dirac-type operators, closed triangulated surfaces with matching
//! tetrahedral meshes, quadrature engines for the Cauchy, Teodorescu and
//! singular Cauchy transforms, and the reconstruction of a boundary vector
//! field as the sum of traces of interior and exterior solutions of the
//! generalized Moisil–Teodorescu system.
//!
//! Sign convention: with the kernel `K(x) = (x)_ψ / (4π|x|³)` one has
//! `ψD K = -δ`, so the Cauchy transform is `∫ K(x-ξ) ν_ψ f dS` and the
//! Teodorescu transform is `-∫ K(x-ξ) f dm`. With this orientation
//! `K_Γ[f] + T[ψD f] = χ_Ω f` and `ψD T[f] = χ_Ω f`.

pub mod error;
pub mod geometry;
pub mod operators;
pub mod probes;
pub mod quaternion;
pub mod reconstruction;
pub mod structural;
pub mod transforms;

pub use error::{Error, Result};
pub use quaternion::{Complex, ComplexQuaternion, RealQuaternion};
pub use structural::StructuralSet;

/// A point of ℝ³.
pub type Point = [f64; 3];

pub(crate) mod vec3 {
    use crate::Point;

    #[inline]
    pub fn add(a: Point, b: Point) -> Point {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    #[inline]
    pub fn sub(a: Point, b: Point) -> Point {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    #[inline]
    pub fn scale(a: Point, s: f64) -> Point {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    #[inline]
    pub fn dot(a: Point, b: Point) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[inline]
    pub fn cross(a: Point, b: Point) -> Point {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    #[inline]
    pub fn norm(a: Point) -> f64 {
        dot(a, a).sqrt()
    }

    #[inline]
    pub fn dist(a: Point, b: Point) -> f64 {
        norm(sub(a, b))
    }

    #[inline]
    pub fn dist2(a: Point, b: Point) -> f64 {
        let d = sub(a, b);
        dot(d, d)
    }

    #[inline]
    pub fn normalize(a: Point) -> Point {
        scale(a, 1.0 / norm(a))
    }

    #[inline]
    pub fn lerp(a: Point, b: Point, t: f64) -> Point {
        [
            a[0] + t * (b[0] - a[0]),
            a[1] + t * (b[1] - a[1]),
            a[2] + t * (b[2] - a[2]),
        ]
    }
}
