use super::*;
use crate::bounds::CertifyConfig;
use crate::domains::{ConvexityClass, DomainSpec};

fn suite(trials: usize, boundary_samples: usize, radius_samples: usize, seed: u64) -> SuiteConfig {
    SuiteConfig { trials, boundary_samples, radius_samples, seed, ..SuiteConfig::default() }
}

fn quick() -> CertifyConfig {
    CertifyConfig { samples: 300, rays: 600, projection_samples: 5000, ..CertifyConfig::default() }
}

#[test]
fn star_suite_passes_with_exact_counts() {
    let r = suite_star(&[2, 3, 4, 6], &suite(500, 0, 0, 0)).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    for c in r.checks.iter().filter(|c| c.name == "symbolic_counts" || c.name == "all_minus_one_equality") {
        assert_eq!(c.worst_margin, 0.0, "{c:?}");
    }
    let eq3 = r.checks.iter().find(|c| c.name == "all_minus_one_equality" && c.n == Some(3)).unwrap();
    let inv = &eq3.witness.as_ref().unwrap()["inverse"];
    let expected = serde_json::to_value(
        CMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[2.0, 1.0, 1.0]]).unwrap(),
    )
    .unwrap();
    assert_eq!(*inv, expected);
}

#[test]
fn star_margins_catch_large_alpha() {
    let a = CMatrix::unit_lower(3, |_, _| Complex64::new(-1.5, 0.0));
    let c = crate::numerics::inverse_coefficients(&a).unwrap();
    // c_31 = 1.5^2 + 1.5 = 3.75 > 2
    assert!(star::coefficient_margin(&c) < -0.8);
}

#[test]
fn containment_suite_is_tight_at_all_minus_one() {
    let r = suite_containment(&[2, 3], &suite(40, 300, 0, 0)).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    for n in [2, 3] {
        let t = r.checks.iter().find(|c| c.name == "tightness_all_minus_one" && c.n == Some(n)).unwrap();
        assert!(t.worst_margin <= 1e-6 && t.worst_margin >= -1e-10, "{t:?}");
    }
    assert!(r.worst_margin <= 1e-6);
}

#[test]
fn koebe_suite_passes() {
    let r = suite_koebe(&[2], &suite(0, 0, 3000, 0)).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    let ext = r.check("koebe_extremal").unwrap();
    assert_eq!(ext.trials, 9);
    assert!(ext.worst_margin >= -1e-12);
    // the slit plane attains |f'(0)| = 4
    assert!(r.check("koebe_derivative").unwrap().worst_margin.abs() < 1e-12);
}

#[test]
fn strictness_on_small_catalog() {
    let fixtures = vec![
        ("polydisc2".to_string(), DomainSpec::polydisc(2).unwrap()),
        ("l1ball2".to_string(), DomainSpec::l1ball(2).unwrap()),
    ];
    let r = suite_strictness(&fixtures, &quick()).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert_eq!(r.check("row_gap").unwrap().worst_margin, 1.0);
    assert!(r.check("witness_excess").unwrap().worst_margin > 0.0);
}

#[test]
fn kappa_probe_on_shears_stays_above_floor() {
    let r = kappa_probe(Family::Shears, 2, 4, None, &quick()).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert_eq!(r.class, ConvexityClass::Convex);
    assert!(r.min_witness_s_hat.unwrap() > 1.0 / 7.0);
    assert!(r.members[3].base_point.norm() > 0.0);
    assert!(kappa_probe(Family::Ball, 2, 0, None, &quick()).is_err());
}

#[test]
fn suites_are_deterministic() {
    let a = suite_star(&[3], &suite(200, 0, 0, 9)).unwrap().to_json();
    let b = suite_star(&[3], &suite(200, 0, 0, 9)).unwrap().to_json();
    assert_eq!(a, b);
    let c = suite_containment(&[2], &suite(10, 100, 0, 9)).unwrap().to_json();
    let d = suite_containment(&[2], &suite(10, 100, 0, 9)).unwrap().to_json();
    assert_eq!(c, d);
    assert_ne!(a, suite_star(&[3], &suite(200, 0, 0, 10)).unwrap().to_json());
}
