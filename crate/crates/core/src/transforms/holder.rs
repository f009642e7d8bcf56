//! Numerical evidence for the regularity condition
//! `Ψ_Γ[f](t) = (1/4π) lim_{δ→0} ∫_{Γ∖B_δ(t)} |f(ξ) − f(t)| / |ξ − t|² dS`.

use serde::Serialize;

use super::BoundaryField;
use crate::geometry::TriangulatedSurface;
use crate::{vec3, Error, Result};

/// Exponents at or below this value trigger a warning.
pub const HOLDER_WARNING_THRESHOLD: f64 = 2.0 / 3.0;
/// Increment ratio above which the truncated integrals are flagged as
/// divergent (a convergent Lipschitz integrand gives about 1/2).
pub const DIVERGENCE_RATIO: f64 = 0.75;
/// Number of truncation radii `δ_k = 16h / 2^k`.
pub const HOLDER_STEPS: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct HolderEstimate {
    pub node: usize,
    pub deltas: Vec<f64>,
    /// Truncated integral at each `δ_k`.
    pub values: Vec<f64>,
    /// Value at the smallest `δ`.
    pub last: f64,
    /// `values[last] / values[last − 1]`; tends to 1 when the limit exists.
    pub ratio: f64,
    /// Ratio of the last two increments; about 1/2 for Lipschitz data and
    /// about 1 for a jump.
    pub increment_ratio: f64,
    pub divergent: bool,
    /// Slope of `log osc(r)` against `log r` near the node.
    pub mu_fit: Option<f64>,
    pub warning: Option<String>,
}

/// Estimate `Ψ_Γ[f]` at the centroid of `node` over a shrinking sequence
/// of truncation radii. Diagnostic only: uniform existence of the limit has
/// no finite certificate.
pub fn holder_condition_estimate(
    surface: &TriangulatedSurface,
    f: &BoundaryField,
    node: usize,
) -> Result<HolderEstimate> {
    f.ensure_matches(surface)?;
    if node >= surface.num_triangles() {
        return Err(Error::InvalidParameter(format!("node {node} out of range")));
    }
    let t = surface.centroids()[node];
    let ft = f.values[node];
    let h = surface.h();
    let deltas: Vec<f64> = (0..HOLDER_STEPS).map(|k| 16.0 * h / f64::powi(2.0, k as i32)).collect();
    let mut values = vec![0.0; HOLDER_STEPS];
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for (tri, &c) in surface.centroids().iter().enumerate() {
        if tri == node {
            continue;
        }
        let r = vec3::dist(c, t);
        let df = (f.values[tri] - ft).norm_c();
        let w = df / (r * r) * surface.areas()[tri] / (4.0 * std::f64::consts::PI);
        for (k, &d) in deltas.iter().enumerate() {
            if r > d {
                values[k] += w;
            }
        }
        if r < deltas[0] {
            samples.push((r, df));
        }
    }
    let n = HOLDER_STEPS;
    let last = values[n - 1];
    let ratio = if values[n - 2] > 0.0 { last / values[n - 2] } else { 1.0 };
    let inc_last = values[n - 1] - values[n - 2];
    let inc_prev = values[n - 2] - values[n - 3];
    let scale = values.iter().cloned().fold(0.0, f64::max);
    let increment_ratio = if inc_prev > 1e-14 * scale.max(1e-300) {
        inc_last / inc_prev
    } else {
        0.0
    };
    let divergent = increment_ratio > DIVERGENCE_RATIO;
    let mu_fit = fit_exponent(&samples, h);
    let warning = match mu_fit {
        Some(mu) if mu <= HOLDER_WARNING_THRESHOLD => Some(format!(
            "fitted Hölder exponent {mu:.3} is at or below 2/3; the decomposition is not guaranteed"
        )),
        _ if divergent => Some("truncated regularity integrals do not contract".into()),
        _ => None,
    };
    Ok(HolderEstimate {
        node,
        deltas,
        values,
        last,
        ratio,
        increment_ratio,
        divergent,
        mu_fit,
        warning,
    })
}

/// Least-squares slope of `log max|f(ξ)−f(t)|` over dyadic distance bins
/// against `log r`. `None` when fewer than two bins carry nonzero
/// oscillation.
fn fit_exponent(samples: &[(f64, f64)], h: f64) -> Option<f64> {
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut lo = h / 2.0;
    for _ in 0..6 {
        let hi = 2.0 * lo;
        let osc = samples
            .iter()
            .filter(|(r, _)| *r > lo && *r <= hi)
            .map(|(_, d)| *d)
            .fold(0.0, f64::max);
        if osc > 0.0 {
            bins.push(((lo * hi).sqrt().ln(), osc.ln()));
        }
        lo = hi;
    }
    if bins.len() < 2 {
        return None;
    }
    let n = bins.len() as f64;
    let mx = bins.iter().map(|b| b.0).sum::<f64>() / n;
    let my = bins.iter().map(|b| b.1).sum::<f64>() / n;
    let sxy: f64 = bins.iter().map(|b| (b.0 - mx) * (b.1 - my)).sum();
    let sxx: f64 = bins.iter().map(|b| (b.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
