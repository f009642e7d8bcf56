use std::f64::consts::PI;

use psimt::geometry::{
    load_off, load_tet, make_ellipsoid, make_jittered_sphere, make_sphere, parse_off, save_off, save_tet,
    TetrahedralMesh, TriangulatedSurface,
};
use psimt::Error;

#[test]
fn off_and_tet_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("psimt-geometry-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (s, m) = make_ellipsoid([1.5, 1.0, 0.8], 2).unwrap();
    let off = dir.join("e.off");
    let tet = dir.join("e.tet");
    save_off(&s, &off).unwrap();
    save_tet(&m, &tet).unwrap();
    let s2 = load_off(&off).unwrap();
    let m2 = load_tet(&tet).unwrap();
    assert_eq!(s2.num_triangles(), s.num_triangles());
    assert!((s2.total_area() - s.total_area()).abs() < 1e-12);
    assert!((m2.total_volume() - m.total_volume()).abs() < 1e-12);
    m2.check_matches_surface(&s2, 1e-9).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ellipsoid_volume_converges() {
    let exact = 4.0 / 3.0 * PI * 1.5 * 1.0 * 0.8;
    let err = |level| {
        let (s, m) = make_ellipsoid([1.5, 1.0, 0.8], level).unwrap();
        assert!((s.signed_volume() - m.total_volume()).abs() < 1e-12);
        (m.total_volume() - exact).abs() / exact
    };
    let (e2, e3) = (err(2), err(3));
    assert!(e3 < 0.01 && e2 / e3 > 3.0, "{e2} {e3}");
}

#[test]
fn jittered_spheres_are_valid_closed_surfaces() {
    for seed in 0..5 {
        let (s, m) = make_jittered_sphere([0.5, -0.2, 0.1], 2.0, 2, 0.2, seed).unwrap();
        m.check_matches_surface(&s, 1e-9).unwrap();
        let n = s.area_weighted_normal_sum();
        assert!(n.iter().all(|v| v.abs() < 1e-10));
        assert!((s.winding_number([0.5, -0.2, 0.1]) - 1.0).abs() < 1e-10);
        assert!(s.winding_number([5.0, 0.0, 0.0]).abs() < 1e-10);
    }
    assert!(matches!(
        make_jittered_sphere([0.0; 3], 1.0, 1, 0.5, 0),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn closest_points_and_distances() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 3).unwrap();
    for x in [[0.0, 0.0, 2.0], [0.3, -0.2, 0.1], [-3.0, 1.0, 0.5]] {
        let (p, d) = s.closest_point(x);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        assert!((d - (r - 1.0).abs()).abs() < 0.01, "{x:?}: {d}");
        let back = ((p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2) + (p[2] - x[2]).powi(2)).sqrt();
        assert!((back - d).abs() < 1e-12);
    }
    let near = s.nearest_nodes([0.0, 0.0, 1.0], 6);
    assert_eq!(near.len(), 6);
    assert!(near.iter().all(|&n| s.centroids()[n][2] > 0.9));
}

#[test]
fn malformed_inputs_are_reported() {
    assert!(matches!(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n"), Err(Error::Parse { .. })));
    // An open surface: one triangle.
    let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
    assert!(TriangulatedSurface::new(v, vec![[0, 1, 2]]).is_err());
    // An inverted tetrahedron.
    let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    assert!(matches!(TetrahedralMesh::new(v, vec![[0, 2, 1, 3]]), Err(Error::Orientation(_))));
}

#[test]
fn inverted_surface_is_rejected() {
    let (s, _) = make_sphere([0.0; 3], 1.0, 1).unwrap();
    let flipped: Vec<[usize; 3]> = s.triangles().iter().map(|t| [t[0], t[2], t[1]]).collect();
    assert!(matches!(
        TriangulatedSurface::new(s.vertices().to_vec(), flipped),
        Err(Error::Orientation(_))
    ));
}
