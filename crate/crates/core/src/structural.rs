//! Structural sets and the ψ^θ family.
//!
//! A structural set is an ordered triple of real quaternions with
//! `ψ^j conj(ψ^k) + ψ^k conj(ψ^j) = 2 δ_jk`. The family used throughout the
//! crate is `ψ^θ = {i, i e^{iθ} j, e^{iθ} j}`, where `e^{iθ}` is the real
//! quaternion exponential `cos θ + i sin θ` (quaternionic unit `i`, not the
//! complex unit): structural sets consist of real quaternions.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::quaternion::RealQuaternion;
use crate::{Error, Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StructuralSet {
    pub psi: [RealQuaternion; 3],
    /// Angle in `[0, 2π)` when the set was built by [`make_psi_theta`].
    pub theta: Option<f64>,
}

/// Reduce an angle to `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `e^{iθ} = cos θ + i sin θ` as a real quaternion.
pub fn exp_i(theta: f64) -> RealQuaternion {
    RealQuaternion::new(theta.cos(), theta.sin(), 0.0, 0.0)
}

/// Build `ψ^θ`; the angle is reduced modulo 2π first.
pub fn make_psi_theta(theta: f64) -> StructuralSet {
    let theta = reduce_angle(theta);
    let e = exp_i(theta);
    let i = RealQuaternion::I;
    let j = RealQuaternion::J;
    StructuralSet {
        psi: [i, i * e * j, e * j],
        theta: Some(theta),
    }
}

impl StructuralSet {
    /// The standard basis `{i, j, k}`.
    pub fn standard() -> Self {
        Self::from_triple([RealQuaternion::I, RealQuaternion::J, RealQuaternion::K])
    }

    /// Arbitrary triple; use [`verify_structural`] to check it.
    pub fn from_triple(psi: [RealQuaternion; 3]) -> Self {
        Self { psi, theta: None }
    }

    /// `(x)_ψ = Σ x_k ψ^k`.
    pub fn embed(&self, x: Point) -> RealQuaternion {
        let mut out = [0.0; 4];
        for (k, p) in self.psi.iter().enumerate() {
            for c in 0..4 {
                out[c] += x[k] * p.0[c];
            }
        }
        RealQuaternion(out)
    }

    /// Componentwise conjugate set `ψ̄`.
    pub fn conj_set(&self) -> Self {
        Self {
            psi: self.psi.map(RealQuaternion::conj),
            theta: None,
        }
    }

    /// True when every member has zero scalar part.
    pub fn is_pure(&self) -> bool {
        self.psi.iter().all(|p| p.scalar() == 0.0)
    }
}

/// Largest norm of `ψ^j conj(ψ^k) + ψ^k conj(ψ^j) - 2δ_jk` over all `j, k`.
pub fn verify_structural(psi: &StructuralSet) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            let a = psi.psi[j] * psi.psi[k].conj() + psi.psi[k] * psi.psi[j].conj();
            let target = if j == k { 2.0 } else { 0.0 };
            let r = a - RealQuaternion::ONE * target;
            worst = worst.max(r.norm());
        }
    }
    worst
}

/// Parse an angle given as decimal radians or one of `0`, `pi/2`, `pi`,
/// `3pi/2`, `2pi` (case-insensitive, optional `π`).
pub fn parse_theta(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let v = match t.as_str() {
        "pi/2" => FRAC_PI_2,
        "pi" => PI,
        "3pi/2" | "3*pi/2" => 3.0 * FRAC_PI_2,
        "2pi" | "2*pi" => TAU,
        other => other
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse angle `{s}`")))?,
    };
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("angle `{s}` is not finite")));
    }
    Ok(reduce_angle(v))
}
