use super::*;
use crate::domains::{ConvexityClass, DomainSpec};
use crate::fixtures;
use crate::numerics::{CMatrix, CVector, Complex64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn normalize(d: &DomainSpec) -> (FrankelFrame, Normalizer) {
    let frame = build_frame(d, &SearchConfig::default()).unwrap();
    let norm = build_normalizer(d, &frame, 0).unwrap();
    (frame, norm)
}

fn close_matrix(m: &CMatrix, rows: &[&[f64]], tol: f64) {
    let expected = CMatrix::from_real_rows(rows).unwrap();
    assert!(m.max_abs_diff(&expected) < tol, "{m:?}");
}

#[test]
fn polydisc_search_prefers_first_axis() {
    let d = DomainSpec::polydisc(2).unwrap();
    let basis = vec![CVector::basis(2, 0), CVector::basis(2, 1)];
    let out = min_boundary_point(&d, &basis, &SearchConfig::default()).unwrap();
    assert!((out.radius - 1.0).abs() < 1e-12);
    assert!(out.contact.distance(&CVector::basis(2, 0)) < 1e-9, "{out:?}");
}

#[test]
fn l1_search_lands_on_equal_moduli() {
    let d = DomainSpec::l1ball(2).unwrap();
    let basis = vec![CVector::basis(2, 0), CVector::basis(2, 1)];
    let out = min_boundary_point(&d, &basis, &SearchConfig::default()).unwrap();
    assert!((out.radius - 0.5f64.sqrt()).abs() < 1e-9);
    assert!(out.contact.distance(&CVector::from_reals(&[0.5, 0.5])) < 1e-9);
}

#[test]
fn ball_search_returns_first_basis_vector() {
    let d = DomainSpec::ball(3).unwrap();
    let basis = vec![CVector::basis(3, 1), CVector::basis(3, 2)];
    let out = min_boundary_point(&d, &basis, &SearchConfig::default()).unwrap();
    assert!((out.radius - 1.0).abs() < 1e-12);
    assert!(out.contact.distance(&CVector::basis(3, 1)) < 1e-9);
}

#[test]
fn polydisc_frame_is_identity() {
    let d = DomainSpec::polydisc(2).unwrap();
    let (frame, norm) = normalize(&d);
    assert!(frame.contacts[0].distance(&CVector::basis(2, 0)) < 1e-9);
    assert!(frame.contacts[1].distance(&CVector::basis(2, 1)) < 1e-9);
    close_matrix(&norm.t, &[&[1.0, 0.0], &[0.0, 1.0]], 1e-9);
    close_matrix(&norm.a, &[&[1.0, 0.0], &[0.0, 1.0]], 1e-9);
}

#[test]
fn l1_frame() {
    let d = DomainSpec::l1ball(2).unwrap();
    let (frame, norm) = normalize(&d);
    let h = 0.5f64.sqrt();
    assert!((frame.radii[0] - h).abs() < 1e-9 && (frame.radii[1] - h).abs() < 1e-9);
    assert!(frame.contacts[1].distance(&CVector::from_reals(&[0.5, -0.5])) < 1e-9);
    close_matrix(&norm.t, &[&[1.0, 1.0], &[1.0, -1.0]], 1e-8);
    close_matrix(&norm.a, &[&[1.0, 0.0], &[0.0, 1.0]], 1e-8);
}

#[test]
fn ball_frame_is_orthonormal() {
    let d = DomainSpec::ball(3).unwrap();
    let (frame, norm) = normalize(&d);
    for r in &frame.radii {
        assert!((r - 1.0).abs() < 1e-12);
    }
    assert!(frame.orthogonality_defect() < 1e-9);
    close_matrix(&norm.a, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]], 1e-9);
}

#[test]
fn sheared_polydisc_frame() {
    let d = fixtures::sheared_polydisc(2, c(0.5, 0.0)).unwrap();
    let (frame, norm) = normalize(&d);
    assert!(frame.contacts[0].distance(&CVector::from_reals(&[0.4, -0.8])) < 1e-8, "{:?}", frame.contacts);
    assert!(frame.contacts[1].distance(&CVector::from_reals(&[1.0, 0.5])) < 1e-8, "{:?}", frame.contacts);
    assert!((frame.radii[0] - 0.8f64.sqrt()).abs() < 1e-9);
    assert!((frame.radii[1] - 1.25f64.sqrt()).abs() < 1e-9);
    assert!((norm.alpha(1, 0) - c(0.4, 0.0)).norm() < 1e-8, "{:?}", norm.a);
    let checks = norm.checks(&d, &frame, 1000, 0).unwrap();
    assert!(checks.passed(), "{checks:?}");
    assert!((checks.row_gaps[0] - 0.6).abs() < 1e-8);
}

#[test]
fn projective_frame() {
    let d = fixtures::projective_bidisc().unwrap();
    let (frame, norm) = normalize(&d);
    assert!(frame.contacts[0].distance(&CVector::from_reals(&[-1.0 / 3.0, 0.0])) < 1e-9, "{:?}", frame.contacts);
    assert!(frame.contacts[1].distance(&CVector::from_reals(&[0.0, 0.5])) < 1e-9, "{:?}", frame.contacts);
    close_matrix(&norm.t, &[&[-3.0, 0.0], &[0.0, 2.0]], 1e-8);
    assert!(norm.functionals[0].coefficients.distance(&CVector::from_reals(&[-3.0, 0.0])) < 1e-8);
    assert!(norm.functionals[1].coefficients.distance(&CVector::from_reals(&[-1.0, 2.0])) < 1e-8);
    assert!((norm.alpha(1, 0) - c(1.0 / 3.0, 0.0)).norm() < 1e-8);
    let checks = norm.checks(&d, &frame, 1000, 0).unwrap();
    assert!(checks.passed(), "{checks:?}");
}

#[test]
fn catalog_invariants() {
    for (name, d) in fixtures::catalog().unwrap() {
        let (frame, norm) = normalize(&d);
        assert!(frame.orthogonality_defect() < 1e-9, "{name}");
        assert!(frame.monotonicity_defect() < 1e-9, "{name}");
        let checks = norm.checks(&d, &frame, 1000, 1).unwrap();
        assert!(checks.passed(), "{name}: {checks:?}");
        assert!(checks.no_extremal_row(), "{name}");
        assert!(norm.a.is_lower_triangular() && norm.a.is_unit_diagonal());
    }
}

#[test]
fn unitary_change_keeps_radii() {
    let d = fixtures::sheared_polydisc(2, c(0.5, 0.0)).unwrap();
    let (frame, _) = normalize(&d);
    let s = 0.5f64.sqrt();
    let u = CMatrix::from_rows(vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]).unwrap();
    let rotated = DomainSpec::affine_image(d, u, CVector::zeros(2)).unwrap();
    let (frame2, _) = normalize(&rotated);
    for (a, b) in frame.radii.iter().zip(&frame2.radii) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn frame_is_deterministic() {
    let d = DomainSpec::lp_ball(2, 3.0).unwrap();
    let f1 = build_frame(&d, &SearchConfig::default()).unwrap();
    let f2 = build_frame(&d, &SearchConfig::default()).unwrap();
    assert_eq!(f1, f2);
}

#[test]
fn wrong_hyperplane_is_surfaced() {
    // contacts that are not nested minimizers produce a functional that does
    // not contain the next subspace
    let d = fixtures::sheared_polydisc(2, c(0.5, 0.0)).unwrap();
    let mut frame = build_frame(&d, &SearchConfig::default()).unwrap();
    frame.contacts.swap(0, 1);
    frame.radii.swap(0, 1);
    let err = build_normalizer(&d, &frame, 0).unwrap_err();
    assert!(matches!(err, crate::Error::TriangularityViolation { .. }), "{err:?}");
}

#[test]
fn convex_class_declared_on_cconvex_domain_still_builds() {
    let d = DomainSpec::polydisc(2).unwrap().with_class(ConvexityClass::CConvex).unwrap();
    let (_, norm) = normalize(&d);
    assert_eq!(norm.class, ConvexityClass::CConvex);
}

#[test]
fn dump_serializes() {
    let d = DomainSpec::l1ball(2).unwrap();
    let (frame, norm) = normalize(&d);
    let checks = norm.checks(&d, &frame, 100, 0).unwrap();
    let dump = FrameDump::new(&d, &frame, &norm, checks);
    let v = serde_json::to_value(&dump).unwrap();
    assert_eq!(v["radii"].as_array().unwrap().len(), 2);
    assert!((v["t"][0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(v["margins"]["normalizer"]["hyperplane_images"].as_f64().unwrap() < 1e-8);
}
