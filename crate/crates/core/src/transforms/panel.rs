//! Closed-form integrals over flat triangles.
//!
//! For a triangle `T` with unit normal `ν`, counter-clockwise about `ν`:
//!
//! * `Ω(x) = ∫_T (ξ−x)·ν / |ξ−x|³ dS`, the signed solid angle, positive when
//!   `x` lies behind the triangle (on the side `−ν`);
//! * `V(x) = ∫_T (x−ξ)/|x−ξ|³ dS = −Ω ν + Σ_e m_e L_e`;
//! * `I(x) = ∫_T 1/|x−ξ| dS = Σ_e (m_e·(a_e − x)) L_e + w Ω`,
//!
//! where `m_e` is the outward in-plane normal of edge `e = (a_e, b_e)`,
//! `L_e = ∫_e 1/|x−ξ| dl` and `w = (x − a)·ν`.

use crate::{vec3, Point};

/// Signed solid angle subtended by the triangle `(a, b, c)` at `x`.
pub fn solid_angle(x: Point, a: Point, b: Point, c: Point) -> f64 {
    let r1 = vec3::sub(a, x);
    let r2 = vec3::sub(b, x);
    let r3 = vec3::sub(c, x);
    let (l1, l2, l3) = (vec3::norm(r1), vec3::norm(r2), vec3::norm(r3));
    let num = vec3::dot(r1, vec3::cross(r2, r3));
    let den = l1 * l2 * l3 + vec3::dot(r1, r2) * l3 + vec3::dot(r1, r3) * l2 + vec3::dot(r2, r3) * l1;
    2.0 * num.atan2(den)
}

/// `∫_{[a,b]} 1/|x−ξ| dl`.
pub fn edge_log(x: Point, a: Point, b: Point) -> f64 {
    let ra = vec3::dist(x, a);
    let rb = vec3::dist(x, b);
    let l = vec3::dist(a, b);
    let s = ra + rb;
    let den = s - l;
    if den <= 0.0 {
        // `x` on the segment: the integral diverges.
        return f64::INFINITY;
    }
    ((s + l) / den).ln()
}

/// Solid angle, edge integrals and edge normals shared by the panel
/// formulas.
struct PanelTerms {
    omega: f64,
    normal: Point,
    logs: [f64; 3],
    edge_normals: [Point; 3],
    corners: [Point; 3],
}

fn panel_terms(x: Point, corners: [Point; 3]) -> PanelTerms {
    let [a, b, c] = corners;
    let n = vec3::normalize(vec3::cross(vec3::sub(b, a), vec3::sub(c, a)));
    let mut logs = [0.0; 3];
    let mut edge_normals = [[0.0; 3]; 3];
    for e in 0..3 {
        let p = corners[e];
        let q = corners[(e + 1) % 3];
        let d = vec3::sub(q, p);
        edge_normals[e] = vec3::scale(vec3::cross(d, n), 1.0 / vec3::norm(d));
        logs[e] = edge_log(x, p, q);
    }
    PanelTerms {
        omega: solid_angle(x, a, b, c),
        normal: n,
        logs,
        edge_normals,
        corners,
    }
}

/// `∫_T (x−ξ)/|x−ξ|³ dS` for `x` not on the closure of an edge.
pub fn triangle_grad_integral(x: Point, corners: [Point; 3]) -> Point {
    let t = panel_terms(x, corners);
    let mut v = vec3::scale(t.normal, -t.omega);
    for e in 0..3 {
        v = vec3::add(v, vec3::scale(t.edge_normals[e], t.logs[e]));
    }
    v
}

/// Edge part `Σ_e m_e L_e` of [`triangle_grad_integral`], continuous across
/// the interior of the triangle.
pub fn edge_normal_log_sum(x: Point, corners: [Point; 3]) -> Point {
    let t = panel_terms(x, corners);
    let mut v = [0.0; 3];
    for e in 0..3 {
        v = vec3::add(v, vec3::scale(t.edge_normals[e], t.logs[e]));
    }
    v
}

/// `∫_T 1/|x−ξ| dS`.
pub fn triangle_inv_r_integral(x: Point, corners: [Point; 3]) -> f64 {
    let t = panel_terms(x, corners);
    let w = vec3::dot(vec3::sub(x, t.corners[0]), t.normal);
    let mut s = w * t.omega;
    for e in 0..3 {
        let m = vec3::dot(t.edge_normals[e], vec3::sub(t.corners[e], x));
        if m != 0.0 {
            s += m * t.logs[e];
        }
    }
    s
}

/// `(∫_T 1/R dS, Ω)` in one pass.
pub fn triangle_inv_r_and_solid_angle(x: Point, corners: [Point; 3]) -> (f64, f64) {
    let t = panel_terms(x, corners);
    let w = vec3::dot(vec3::sub(x, t.corners[0]), t.normal);
    let mut s = w * t.omega;
    for e in 0..3 {
        let m = vec3::dot(t.edge_normals[e], vec3::sub(t.corners[e], x));
        if m != 0.0 {
            s += m * t.logs[e];
        }
    }
    (s, t.omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Brute-force quadrature: uniform subdivision into `n²` sub-triangles,
    /// midpoint rule on each.
    fn brute<F: Fn(Point) -> [f64; 4]>(corners: [Point; 3], n: usize, f: F) -> [f64; 4] {
        let [a, b, c] = corners;
        let area = 0.5 * vec3::norm(vec3::cross(vec3::sub(b, a), vec3::sub(c, a)));
        let sub_area = area / (n * n) as f64;
        let pt = |i: f64, j: f64| {
            let u = i / n as f64;
            let v = j / n as f64;
            vec3::add(a, vec3::add(vec3::scale(vec3::sub(b, a), u), vec3::scale(vec3::sub(c, a), v)))
        };
        let mut acc = [0.0; 4];
        for i in 0..n {
            for j in 0..n - i {
                let ctr = pt(i as f64 + 1.0 / 3.0, j as f64 + 1.0 / 3.0);
                let v = f(ctr);
                for k in 0..4 {
                    acc[k] += v[k] * sub_area;
                }
                if i + j + 1 < n {
                    let ctr = pt(i as f64 + 2.0 / 3.0, j as f64 + 2.0 / 3.0);
                    let v = f(ctr);
                    for k in 0..4 {
                        acc[k] += v[k] * sub_area;
                    }
                }
            }
        }
        acc
    }

    fn tri() -> [Point; 3] {
        [[0.1, -0.2, 0.0], [1.2, 0.1, 0.1], [0.3, 0.9, -0.1]]
    }

    #[test]
    fn matches_brute_force_quadrature() {
        for x in [[0.4, 0.3, 0.8], [0.5, 0.2, -0.5], [2.0, 1.0, 0.3], [-0.4, 0.1, 0.2]] {
            let exact = triangle_grad_integral(x, tri());
            let inv = triangle_inv_r_integral(x, tri());
            let num = brute(tri(), 400, |xi| {
                let d = vec3::sub(x, xi);
                let r = vec3::norm(d);
                [d[0] / r.powi(3), d[1] / r.powi(3), d[2] / r.powi(3), 1.0 / r]
            });
            for k in 0..3 {
                assert!((exact[k] - num[k]).abs() < 1e-4, "x={x:?} k={k}: {} vs {}", exact[k], num[k]);
            }
            assert!((inv - num[3]).abs() < 1e-5, "inv {inv} vs {}", num[3]);
        }
    }

    #[test]
    fn closed_surface_solid_angle() {
        let v = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let faces = [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
        let total = |x: Point| -> f64 { faces.iter().map(|f| solid_angle(x, v[f[0]], v[f[1]], v[f[2]])).sum() };
        assert!((total([0.1, 0.2, 0.15]) - 4.0 * PI).abs() < 1e-12);
        assert!(total([1.0, 1.0, 1.0]).abs() < 1e-12);
    }

    #[test]
    fn in_plane_point_inside_triangle() {
        // Approaching the plane from behind gives Ω → 2π, from the front −2π;
        // the tangential part stays finite.
        let t = tri();
        let c = vec3::scale(vec3::add(vec3::add(t[0], t[1]), t[2]), 1.0 / 3.0);
        let n = vec3::normalize(vec3::cross(vec3::sub(t[1], t[0]), vec3::sub(t[2], t[0])));
        let below = vec3::sub(c, vec3::scale(n, 1e-9));
        let above = vec3::add(c, vec3::scale(n, 1e-9));
        assert!((solid_angle(below, t[0], t[1], t[2]) - 2.0 * PI).abs() < 1e-6);
        assert!((solid_angle(above, t[0], t[1], t[2]) + 2.0 * PI).abs() < 1e-6);
        let a = triangle_inv_r_integral(below, t);
        let b = triangle_inv_r_integral(above, t);
        assert!((a - b).abs() < 1e-6);
    }
}
