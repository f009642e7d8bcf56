//! Probe point sets.

use rand::Rng;

use crate::{vec3, Point};

/// `n` near-uniform points on the sphere of the given centre and radius
/// (golden-angle spiral).
pub fn fibonacci_sphere(n: usize, center: Point, radius: f64) -> Vec<Point> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            vec3::add(center, vec3::scale([r * phi.cos(), r * phi.sin(), z], radius))
        })
        .collect()
}

/// Fibonacci points on several concentric spheres.
pub fn fibonacci_shells(n: usize, center: Point, radii: &[f64]) -> Vec<Point> {
    radii
        .iter()
        .flat_map(|&r| fibonacci_sphere(n, center, r))
        .collect()
}

/// Uniform random point on the unit sphere.
pub fn random_unit_vector<R: Rng>(rng: &mut R) -> Point {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0f64..1.0),
        ];
        let n = vec3::norm(v);
        if n > 1e-3 && n <= 1.0 {
            return vec3::scale(v, 1.0 / n);
        }
    }
}

/// Uniform random point in the spherical shell `r_min ≤ |x − c| ≤ r_max`.
pub fn random_in_shell<R: Rng>(rng: &mut R, center: Point, r_min: f64, r_max: f64) -> Point {
    let u: f64 = rng.gen_range(0.0..=1.0);
    let r = (r_min.powi(3) + u * (r_max.powi(3) - r_min.powi(3))).cbrt();
    vec3::add(center, vec3::scale(random_unit_vector(rng), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fibonacci_points_lie_on_sphere_and_balance() {
        let pts = fibonacci_sphere(64, [1.0, 0.0, 0.0], 2.0);
        assert_eq!(pts.len(), 64);
        let mut mean = [0.0; 3];
        for p in &pts {
            assert!((vec3::dist(*p, [1.0, 0.0, 0.0]) - 2.0).abs() < 1e-12);
            mean = vec3::add(mean, *p);
        }
        let mean = vec3::scale(mean, 1.0 / 64.0);
        assert!(vec3::dist(mean, [1.0, 0.0, 0.0]) < 0.05);
    }

    #[test]
    fn shell_sampling_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_in_shell(&mut rng, [0.0; 3], 0.5, 0.6);
            let r = vec3::norm(p);
            assert!((0.5 - 1e-12..=0.6 + 1e-12).contains(&r));
        }
    }
}
