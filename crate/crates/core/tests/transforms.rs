use std::sync::Arc;

use psimt::geometry::{make_ellipsoid, make_jittered_sphere, make_sphere};
use psimt::operators::{apply_psi_d, ConstantField, DerivativeScheme, FnField, Polynomial, QuaternionField};
use psimt::probes::fibonacci_sphere;
use psimt::structural::make_psi_theta;
use psimt::transforms::{
    boundary_limit, cauchy_transform, cauchy_transform_near, default_probes, holder_condition_estimate,
    m_psi_star_test, m_psi_test, right_boundary_limit, right_cauchy_transform, sc_vec_split, singular_cauchy,
    BoundaryField, KernelField, Side, SingularTreatment, Teodorescu, TeodorescuOptions, DEFAULT_EPS_FACTOR,
};
use psimt::{Complex, ComplexQuaternion, Error, Point};

fn vector(v: [f64; 3]) -> ComplexQuaternion {
    ComplexQuaternion::from_vector(v.map(|x| Complex::new(x, 0.0)))
}

#[test]
fn cauchy_formula_on_an_ellipsoid() {
    let (s, _) = make_ellipsoid([1.4, 1.0, 0.7], 3).unwrap();
    let psi = make_psi_theta(2.0);
    let k = Arc::new(KernelField::new(psi, [0.0, 0.0, 1.6]));
    let f = BoundaryField::sample(&s, k.clone());
    for x in fibonacci_sphere(12, [0.0; 3], 0.3) {
        let e = k.eval(x);
        assert!((cauchy_transform_near(&s, &f, &psi, x) - e).norm_c() < 0.03 * e.norm_c());
    }
    // Outside, the transform of an interior solution vanishes.
    for x in fibonacci_sphere(12, [0.0; 3], 3.0) {
        assert!(cauchy_transform(&s, &f, &psi, x).unwrap().norm_c() < 0.03 * f.max_norm());
    }
}

#[test]
fn right_transform_reproduces_right_solutions() {
    // The kernel is right- as well as left-hyperholomorphic.
    let (s, _) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    let psi = make_psi_theta(0.4);
    let k = Arc::new(KernelField::new(psi, [1.5, 1.0, 0.5]));
    let f = BoundaryField::sample(&s, k.clone());
    let x = [0.1, -0.2, 0.15];
    let e = k.eval(x);
    assert!((right_cauchy_transform(&s, &f, &psi, x).unwrap() - e).norm_c() < 0.02 * e.norm_c());
}

#[test]
fn scalar_vector_split_reassembles() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 2).unwrap();
    let psi = make_psi_theta(1.1);
    let f = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[1], x[2] * x[0], -x[0]]))));
    for x in [[0.0, 0.0, 0.1], [2.0, 0.5, 0.0]] {
        let (sc, v) = sc_vec_split(&s, &f, &psi, x).unwrap();
        let full = cauchy_transform(&s, &f, &psi, x).unwrap();
        assert!((ComplexQuaternion::from_scalar(sc) + v).max_abs_diff(full) < 1e-12);
    }
}

#[test]
fn x1_i_is_admissible_but_x2_i_is_not() {
    // ψD(x1 i) = -1 is scalar, so the Cauchy transform of its trace has no
    // scalar part; ψD(x2 i) has a vector part and the scalar part survives.
    let (s, _) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    let probes = default_probes(&s);
    let nodes: Vec<usize> = (0..s.num_triangles()).step_by(9).collect();
    for theta in [0.0, 1.0, 2.5] {
        let psi = make_psi_theta(theta);
        let x1 = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[0], 0.0, 0.0]))));
        let x2 = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[1], 0.0, 0.0]))));
        let m1 = m_psi_test(&s, &x1, &psi, &probes, 0.02).unwrap();
        let m2 = m_psi_test(&s, &x2, &psi, &probes, 0.02).unwrap();
        assert!(m1.member && m1.relative < 1e-3, "{}", m1.relative);
        assert!(!m2.member && m2.relative > 0.1, "{}", m2.relative);
        assert!(matches!(m2.ensure_member(), Err(Error::MembershipFailed { .. })));
        let s1 = m_psi_star_test(&s, &x1, &psi, &nodes, DEFAULT_EPS_FACTOR, 0.05).unwrap();
        let s2 = m_psi_star_test(&s, &x2, &psi, &nodes, DEFAULT_EPS_FACTOR, 0.05).unwrap();
        assert!(s1.member && !s2.member, "{} {}", s1.relative, s2.relative);
    }
}

#[test]
fn non_vector_data_are_rejected_by_membership_tests() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 1).unwrap();
    let f = BoundaryField::sample(&s, Arc::new(ConstantField(ComplexQuaternion::ONE)));
    let psi = make_psi_theta(0.0);
    assert!(matches!(
        m_psi_test(&s, &f, &psi, &default_probes(&s), 0.02),
        Err(Error::NotPureVector { .. })
    ));
}

#[test]
fn plemelj_relations_on_a_jittered_surface() {
    let (s, _) = make_jittered_sphere([0.0; 3], 1.0, 3, 0.1, 5).unwrap();
    let psi = make_psi_theta(0.8);
    let f = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[1], 0.0, x[0]]))));
    for node in (0..s.num_triangles()).step_by(97) {
        let kp = boundary_limit(&s, &f, &psi, node, Side::Interior).unwrap();
        let km = boundary_limit(&s, &f, &psi, node, Side::Exterior).unwrap();
        let sv = singular_cauchy(&s, &f, &psi, node, DEFAULT_EPS_FACTOR).unwrap();
        assert!((kp - km - f.values[node]).norm_c() < 1e-12);
        assert!((kp + km - sv).norm_c() < 0.08 * f.max_norm());
        let rp = right_boundary_limit(&s, &f, &psi, node, Side::Interior).unwrap();
        let rm = right_boundary_limit(&s, &f, &psi, node, Side::Exterior).unwrap();
        assert!((rp - rm - f.values[node]).norm_c() < 1e-12);
    }
}

#[test]
fn interior_limit_of_a_solution_is_its_trace() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    let psi = make_psi_theta(3.0);
    let k = Arc::new(KernelField::new(psi, [0.0, 2.0, 0.0]));
    let f = BoundaryField::sample(&s, k);
    for node in (0..s.num_triangles()).step_by(61) {
        let kp = boundary_limit(&s, &f, &psi, node, Side::Interior).unwrap();
        let km = boundary_limit(&s, &f, &psi, node, Side::Exterior).unwrap();
        assert!((kp - f.values[node]).norm_c() < 0.05 * f.max_norm());
        assert!(km.norm_c() < 0.05 * f.max_norm());
    }
}

#[test]
fn near_evaluator_agrees_with_centroid_rule_far_away() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    let psi = make_psi_theta(0.2);
    let f = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[2], x[0], 1.0]))));
    for x in [[0.0, 0.0, 0.0], [4.0, 1.0, -2.0]] {
        let a = cauchy_transform(&s, &f, &psi, x).unwrap();
        let b = cauchy_transform_near(&s, &f, &psi, x);
        let d = (a - b).norm_c() / f.max_norm();
        assert!(d < 1e-2, "{x:?}: {d:e}");
    }
}

#[test]
fn teodorescu_is_a_right_inverse_of_psi_d() {
    let (_, m) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    let psi = make_psi_theta(1.3);
    let one = Complex::new(1.0, 0.0);
    let z = Complex::new(0.0, 0.0);
    let g = Polynomial::default()
        .term(ComplexQuaternion::new(one, z, one, z), [0, 0, 0])
        .term(ComplexQuaternion::new(z, one, z, z), [1, 0, 0])
        .term(ComplexQuaternion::new(z, z, z, one), [0, 1, 1]);
    let t = Teodorescu::new(&m, Arc::new(g.clone()), psi, TeodorescuOptions::default()).unwrap();
    for x in fibonacci_sphere(6, [0.0; 3], 0.4) {
        let d = apply_psi_d(&psi, &t, x, DerivativeScheme::Central { h: 1e-3 }).unwrap();
        let e = g.eval(x);
        assert!((d - e).norm_c() < 0.05 * e.norm_c(), "{:?} vs {:?}", d, e);
    }
}

#[test]
fn both_singular_treatments_satisfy_borel_pompeiu() {
    // Inside Ω, T[ψD p] = p − K_Γ[p].
    let psi = make_psi_theta(0.0);
    let p = Arc::new(FnField::new(|x: Point| vector([x[0] * x[1], x[2] * x[2], x[0]])));
    let q = p.clone();
    let g = Arc::new(FnField::new(move |x: Point| {
        apply_psi_d(&psi, q.as_ref(), x, DerivativeScheme::Central { h: 1e-4 }).unwrap()
    }));
    let mut sub_err = Vec::new();
    for level in [2, 3] {
        let (s, m) = make_sphere([0.0; 3], 1.0, level).unwrap();
        let f = BoundaryField::sample(&s, p.clone());
        let sub = Teodorescu::new(&m, g.clone(), psi, TeodorescuOptions::default()).unwrap();
        let drop = Teodorescu::new(
            &m,
            g.clone(),
            psi,
            TeodorescuOptions {
                treatment: SingularTreatment::SubdivideDrop,
                ..Default::default()
            },
        )
        .unwrap();
        let mut worst = 0.0f64;
        for x in [[0.1, 0.2, 0.0], [0.0, 0.0, 0.6], [0.3, -0.3, 0.3]] {
            let e = p.eval(x) - cauchy_transform_near(&s, &f, &psi, x);
            worst = worst.max((sub.eval_at(x) - e).norm_c());
            assert!((drop.eval_at(x) - e).norm_c() < 0.1 * e.norm_c(), "{level} {x:?}");
        }
        sub_err.push(worst);
    }
    assert!(sub_err[1] < 0.5 * sub_err[0] && sub_err[1] < 5e-3, "{sub_err:?}");
}

#[test]
fn quadrature_budget_is_enforced() {
    let (_, m) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    let options = TeodorescuOptions {
        budget: 1000,
        ..Default::default()
    };
    let g = Arc::new(ConstantField(ComplexQuaternion::ONE));
    assert!(matches!(
        Teodorescu::new(&m, g, make_psi_theta(0.0), options),
        Err(Error::QuadratureBudgetExceeded { .. })
    ));
}

#[test]
fn regularity_estimate_separates_lipschitz_data_from_jumps() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 4).unwrap();
    let smooth = BoundaryField::sample(&s, Arc::new(FnField::new(|x: Point| vector([x[0], x[1], 0.0]))));
    // A node on the equator, where the sign data jump.
    let node = (0..s.num_triangles())
        .min_by(|&a, &b| s.centroids()[a][2].abs().total_cmp(&s.centroids()[b][2].abs()))
        .unwrap();
    let e = holder_condition_estimate(&s, &smooth, node).unwrap();
    assert!(!e.divergent && e.warning.is_none(), "{e:?}");
    assert!(e.mu_fit.unwrap() > 0.8);
    let jump = BoundaryField::sample(
        &s,
        Arc::new(FnField::new(|x: Point| vector([x[2].signum(), 0.0, 0.0]))),
    );
    let e = holder_condition_estimate(&s, &jump, node).unwrap();
    assert!(e.warning.is_some(), "{e:?}");
}
