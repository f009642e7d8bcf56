use std::sync::Arc;

use psimt::geometry::{make_ellipsoid, make_sphere, TetrahedralMesh, TriangulatedSurface};
use psimt::operators::{ConstantField, FnField, QuaternionField, SharedField};
use psimt::probes::fibonacci_sphere;
use psimt::reconstruction::{
    decompose, decompose_with, verify_decomposition_with, DecomposeOptions, ExtensionParams, VerifyOptions,
};
use psimt::structural::make_psi_theta;
use psimt::transforms::{BoundaryField, KernelField, TeodorescuOptions};
use psimt::{Complex, ComplexQuaternion, Error, Point};

fn vector(v: [f64; 3]) -> ComplexQuaternion {
    ComplexQuaternion::from_vector(v.map(|x| Complex::new(x, 0.0)))
}

/// Boundary values of `c + K(·)`, whose exact decomposition is `F⁺ = c`,
/// `F⁻ = K`.
fn oracle_data(s: &TriangulatedSurface, theta: f64, c: ComplexQuaternion) -> (BoundaryField, KernelField) {
    let k = KernelField::new(make_psi_theta(theta), [0.0; 3]);
    let f = BoundaryField::sample(s, Arc::new(FnField::new(move |x| c + k.eval(x))));
    (f, k)
}

fn worst_relative(points: &[Point], got: &dyn QuaternionField, want: &dyn QuaternionField) -> f64 {
    points
        .iter()
        .map(|&x| (got.eval(x) - want.eval(x)).norm_c() / want.eval(x).norm_c())
        .fold(0.0, f64::max)
}

fn sphere(level: u32) -> (TriangulatedSurface, TetrahedralMesh) {
    make_sphere([0.0; 3], 1.0, level).unwrap()
}

#[test]
fn ellipsoid_decomposition_matches_the_exact_pair() {
    let (s, m) = make_ellipsoid([1.3, 1.0, 0.8], 3).unwrap();
    let c = vector([0.0, 1.0, -0.5]);
    let (f, k) = oracle_data(&s, 0.9, c);
    let d = decompose(&s, &m, &f, 0.9, &ExtensionParams::for_surface(&s)).unwrap();
    let inner = fibonacci_sphere(12, [0.0; 3], 0.3);
    let outer = fibonacci_sphere(12, [0.0; 3], 2.5);
    let plus = worst_relative(&inner, d.f_plus.as_ref(), &ConstantField(c));
    let minus = worst_relative(&outer, d.f_minus.as_ref(), &k);
    assert!(plus < 0.05 && minus < 0.05, "{plus:e} {minus:e}");
}

#[test]
fn decomposition_is_linear_in_the_data() {
    let (s, m) = sphere(2);
    let params = ExtensionParams::for_surface(&s);
    let (f1, _) = oracle_data(&s, 0.4, vector([1.0, 0.0, 0.0]));
    let (f2, _) = oracle_data(&s, 0.4, vector([0.0, 0.0, 2.0]));
    let sum = BoundaryField::new(f1.values.iter().zip(&f2.values).map(|(a, b)| *a + *b).collect());
    let d1 = decompose(&s, &m, &f1, 0.4, &params).unwrap();
    let d2 = decompose(&s, &m, &f2, 0.4, &params).unwrap();
    let d = decompose(&s, &m, &sum, 0.4, &params).unwrap();
    for x in [[0.1, 0.0, 0.2], [0.0, 2.0, 0.0], [0.5, 0.5, 0.3]] {
        let plus = d1.f_plus.eval(x) + d2.f_plus.eval(x);
        let minus = d1.f_minus.eval(x) + d2.f_minus.eval(x);
        assert!((d.f_plus.eval(x) - plus).norm_c() < 1e-10 * plus.norm_c().max(1.0));
        assert!((d.f_minus.eval(x) - minus).norm_c() < 1e-10 * minus.norm_c().max(1.0));
    }
}

#[test]
fn exterior_part_does_not_depend_on_the_layer_width() {
    let (s, m) = sphere(3);
    let (f, k) = oracle_data(&s, 2.0, vector([1.0, 1.0, 0.0]));
    let outer = fibonacci_sphere(12, [0.0; 3], 2.0);
    let r = s.inradius_estimate();
    for factor in [0.2, 0.3, 0.4] {
        let params = ExtensionParams::for_surface(&s).with_rho(factor * r);
        let d = decompose(&s, &m, &f, 2.0, &params).unwrap();
        let minus = worst_relative(&outer, d.f_minus.as_ref(), &k);
        assert!(minus < 0.05, "rho = {factor}·r: {minus:e}");
    }
}

#[test]
fn trace_check_detects_a_perturbed_exterior_part() {
    let (s, m) = sphere(3);
    let (f, _) = oracle_data(&s, 0.0, vector([1.0, 0.0, 0.0]));
    let mut d = decompose(&s, &m, &f, 0.0, &ExtensionParams::for_surface(&s)).unwrap();
    let options = VerifyOptions {
        nodes: Some((0..s.num_triangles()).step_by(40).collect()),
        decay_radii: vec![],
        ..Default::default()
    };
    let good = verify_decomposition_with(&d, &f, &options).unwrap();
    assert!(good.relative_trace_residual < 0.05, "{good:?}");
    let minus = d.f_minus.clone();
    let shift = vector([0.0, 0.2, 0.0]);
    d.f_minus = Arc::new(FnField::new(move |x| minus.eval(x) + shift)) as SharedField;
    let bad = verify_decomposition_with(&d, &f, &options).unwrap();
    assert!(bad.relative_trace_residual > 0.1, "{}", bad.relative_trace_residual);
}

#[test]
fn data_outside_the_admissible_class_are_rejected() {
    let (s, m) = sphere(2);
    let params = ExtensionParams::for_surface(&s);
    let f = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[1], 0.0, 0.0]))));
    assert!(matches!(
        decompose(&s, &m, &f, 0.0, &params),
        Err(Error::MembershipFailed { .. })
    ));
    let g = BoundaryField::sample(&s, Arc::new(ConstantField(ComplexQuaternion::ONE)));
    assert!(matches!(decompose(&s, &m, &g, 0.0, &params), Err(Error::NotPureVector { .. })));
}

#[test]
fn invalid_layer_width_is_rejected() {
    let (s, m) = sphere(2);
    let f = BoundaryField::zeros(s.num_triangles());
    let r = s.inradius_estimate();
    for rho in [0.0, 0.6 * r] {
        let params = ExtensionParams::for_surface(&s).with_rho(rho);
        assert!(matches!(
            decompose(&s, &m, &f, 0.0, &params),
            Err(Error::InvalidParameter(_))
        ));
    }
}

#[test]
fn quadrature_budget_is_enforced() {
    let (s, m) = sphere(3);
    let options = DecomposeOptions {
        teodorescu: TeodorescuOptions {
            budget: 10_000,
            ..Default::default()
        },
        ..DecomposeOptions::for_surface(&s)
    };
    let f = BoundaryField::zeros(s.num_triangles());
    assert!(matches!(
        decompose_with(&s, &m, &f, 0.0, &options),
        Err(Error::QuadratureBudgetExceeded { .. })
    ));
}

#[test]
fn whitney_field_is_supported_on_the_closed_domain() {
    let (s, m) = sphere(2);
    let (f, _) = oracle_data(&s, 1.0, vector([0.0, 0.0, 1.0]));
    let d = decompose(&s, &m, &f, 1.0, &ExtensionParams::for_surface(&s)).unwrap();
    let w = d.whitney();
    for (node, &p) in s.centroids().iter().enumerate().step_by(17) {
        assert!((w.eval(p) - f.values[node]).norm_c() < 1e-12 * f.max_norm());
    }
    for x in fibonacci_sphere(10, [0.0; 3], 1.5) {
        assert_eq!(w.eval(x), ComplexQuaternion::ZERO);
    }
    assert!(w.eval([0.0; 3]).norm_c() > 0.0);
}

#[test]
fn zero_data_give_zero_parts() {
    let (s, m) = sphere(2);
    let f = BoundaryField::zeros(s.num_triangles());
    let d = decompose(&s, &m, &f, 0.7, &ExtensionParams::for_surface(&s)).unwrap();
    assert!(d.warnings.is_empty());
    for x in [[0.0; 3], [0.2, 0.1, -0.3], [3.0, 0.0, 0.0]] {
        assert_eq!(d.f_plus.eval(x), ComplexQuaternion::ZERO);
        assert_eq!(d.f_minus.eval(x), ComplexQuaternion::ZERO);
    }
}
