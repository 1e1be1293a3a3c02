use rayon::prelude::*;
use serde_json::json;

use super::{all_minus_one, matrix_json, random_unit_lower, trial_rng, CheckSummary, SuiteConfig, SuiteReport};
use crate::bounds::simplex_image_margins_for;
use crate::error::Result;
use crate::numerics::{CMatrix, Complex64};
use crate::planar::{koebe_bound, qualifying_maps, rho_product_check, tau_radius_check, PlanarRiemannMap, PlanarShape};
use crate::sampling;

const TAG: u64 = 2;

/// Radii `c` at which the Cayley and distortion containments are sampled.
pub const RADIUS_PARAMETERS: [f64; 3] = [1.0 / 3.0, 0.447_213_595_499_957_9, 1.0];

/// Both simplex-image containments and the two planar radius lemmas.
pub fn suite_lemmas(dims: &[usize], config: &SuiteConfig) -> Result<SuiteReport> {
    let containment = suite_containment(dims, config)?;
    let koebe = suite_koebe(dims, config)?;
    let mut report = SuiteReport::combine("lemmas", vec![containment, koebe]);
    report.trials = config.trials;
    Ok(report)
}

/// `D^n / (2^n - 1)` and `B^n / c_n` inside `A(simplex)` for random
/// unit lower-triangular `A` with `|alpha| <= 1`, plus the tight all-(-1)
/// configuration, whose margin must come out within `1e-6` of zero.
pub fn suite_containment(dims: &[usize], config: &SuiteConfig) -> Result<SuiteReport> {
    let SuiteConfig { trials, boundary_samples: samples, seed, tol, .. } = *config;
    let mut checks = Vec::new();
    for &n in dims {
        let results: Vec<(CMatrix, f64, f64)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, TAG, n, t);
                let a = random_unit_lower(&mut rng, n);
                let (ball, pd) = simplex_image_margins_for(&a, samples, seed ^ ((n as u64) << 32 | t as u64))?;
                Ok((a, pd.min_slack, ball.min_slack))
            })
            .collect::<Result<_>>()?;
        let mut pd = CheckSummary::new("polydisc_in_simplex_image", Some(n));
        let mut ball = CheckSummary::new("ball_in_simplex_image", Some(n));
        for (a, p, b) in &results {
            pd.record_margin(*p, tol, || json!({ "a": matrix_json(a) }));
            ball.record_margin(*b, tol, || json!({ "a": matrix_json(a) }));
        }
        checks.push(pd);
        checks.push(ball);

        let a = all_minus_one(n);
        let (ball_tight, pd_tight) = simplex_image_margins_for(&a, samples, seed)?;
        let mut tight = CheckSummary::new("tightness_all_minus_one", Some(n));
        for (shape, m) in [("polydisc", pd_tight.min_slack), ("ball", ball_tight.min_slack)] {
            tight.record(m, !(m >= -tol && m <= 1e-6), || json!({ "shape": shape, "a": matrix_json(&a) }));
        }
        checks.push(tight);
    }
    Ok(SuiteReport::from_checks("containment", dims.to_vec(), trials, seed, checks))
}

/// Koebe extremal values of the slit-plane map, `|f'(0)| <= 4` and the
/// distortion estimate for the qualifying catalog maps, and the `tau(c)` and
/// `rho(c)` radius containments.
pub fn suite_koebe(dims: &[usize], config: &SuiteConfig) -> Result<SuiteReport> {
    let SuiteConfig { radius_samples: samples, seed, tol, .. } = *config;
    let maps = qualifying_maps();
    let mut checks = vec![slit_extremal()?, derivative_bound(&maps, tol), distortion_bound(&maps, samples.min(10_000), seed, tol)?];
    for &n in dims {
        let mut tau = CheckSummary::new("tau_radius", Some(n));
        let mut rho = CheckSummary::new("rho_radius", Some(n));
        for (i, &c) in RADIUS_PARAMETERS.iter().enumerate() {
            let r = tau_radius_check(n, c, samples, seed ^ i as u64)?;
            tau.record(r.min_slack, !r.passed(), || json!({ "c": c }));
            // rotate through the catalog so every map shows up in some coordinate
            let chosen: Vec<PlanarRiemannMap> = (0..n).map(|k| maps[(k + i) % maps.len()].clone()).collect();
            let r = rho_product_check(&chosen, c, samples, seed ^ i as u64)?;
            rho.record(r.min_slack, !r.passed(), || {
                json!({ "c": c, "shapes": chosen.iter().map(|m| &m.omega).collect::<Vec<_>>() })
            });
        }
        checks.push(tau);
        checks.push(rho);
    }
    Ok(SuiteReport::from_checks("koebe", dims.to_vec(), samples, seed, checks))
}

/// `|f(-r)| = 4 r / (1 - r)^2` for the slit-plane map, `r = 0.1, ..., 0.9`.
fn slit_extremal() -> Result<CheckSummary> {
    let slit = PlanarRiemannMap::new(PlanarShape::SlitPlane)?;
    let mut check = CheckSummary::new("koebe_extremal", None);
    for i in 1..=9 {
        let r = i as f64 / 10.0;
        let value = slit.inverse(Complex64::new(-r, 0.0))?.norm();
        let err = (value - koebe_bound(Complex64::new(r, 0.0))?).abs();
        check.record(-err, err > 1e-12, || json!({ "r": r, "value": value }));
    }
    Ok(check)
}

fn derivative_bound(maps: &[PlanarRiemannMap], tol: f64) -> CheckSummary {
    let mut check = CheckSummary::new("koebe_derivative", None);
    for m in maps {
        let d = m.inverse_derivative_at_zero().norm();
        check.record_margin(4.0 - d, tol, || json!({ "shape": m.omega, "derivative": d }));
    }
    check
}

/// `|f(w)| <= |f'(0)| |w| / (1 - |w|)^2`, relative slack, sampled in the disc.
fn distortion_bound(maps: &[PlanarRiemannMap], samples: usize, seed: u64, tol: f64) -> Result<CheckSummary> {
    let mut check = CheckSummary::new("koebe_distortion", None);
    for (i, m) in maps.iter().enumerate() {
        let mut rng = trial_rng(seed, TAG, 0, i);
        let d = m.inverse_derivative_at_zero().norm();
        for _ in 0..samples {
            let w = sampling::unit_disc(&mut rng) * 0.999;
            let bound = d * koebe_bound(w)? / 4.0;
            let value = m.inverse(w)?.norm();
            check.record_margin((bound - value) / bound.max(1e-300), tol, || json!({ "shape": m.omega, "w": [w.re, w.im] }));
        }
    }
    Ok(check)
}
