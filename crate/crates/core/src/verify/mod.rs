//! Standalone property suites for the containments the bounds rest on, and
//! an empirical probe of the infimum of the bounds over domain families.
//!
//! Suites never fail on small positive margins; a sampled check counts as a
//! violation only when its margin drops below `-tol`.

mod kappa;
mod lemmas;
mod star;
mod strictness;

pub use kappa::{kappa_probe, Family, KappaProbeReport, ProbeMember};
pub use lemmas::{suite_containment, suite_koebe, suite_lemmas, RADIUS_PARAMETERS};
pub use star::suite_star;
pub use strictness::suite_strictness;

use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use crate::numerics::{CMatrix, Complex64};
use crate::sampling::{self, Purpose, StreamRng};

pub const VIOLATION_TOL: f64 = 1e-10;

/// Budgets, seed and tolerance shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    /// Random matrices per dimension.
    pub trials: usize,
    /// Boundary samples per matrix in the containment checks.
    pub boundary_samples: usize,
    /// Sphere samples per radius check.
    pub radius_samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trials: 1000, boundary_samples: 1000, radius_samples: 100_000, tol: VIOLATION_TOL, seed: 0 }
    }
}

/// One named check inside a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub n: Option<usize>,
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    /// Inputs of the worst trial.
    pub witness: Option<Value>,
}

impl CheckSummary {
    fn new(name: impl Into<String>, n: Option<usize>) -> Self {
        CheckSummary { name: name.into(), n, trials: 0, violations: 0, worst_margin: f64::INFINITY, witness: None }
    }

    /// Records one trial; `failed` decides the violation, the margin is kept either way.
    fn record(&mut self, margin: f64, failed: bool, witness: impl FnOnce() -> Value) {
        self.trials += 1;
        if failed {
            self.violations += 1;
        }
        if margin < self.worst_margin || self.witness.is_none() {
            if margin < self.worst_margin {
                self.worst_margin = margin;
            }
            self.witness = Some(witness());
        }
    }

    /// Records a trial that fails when `margin < -tol`.
    fn record_margin(&mut self, margin: f64, tol: f64, witness: impl FnOnce() -> Value) {
        self.record(margin, !(margin >= -tol), witness);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub violations: usize,
    pub worst_margin: f64,
    pub witness: Option<Value>,
    pub checks: Vec<CheckSummary>,
    /// Inputs a check skipped, with the reason.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn from_checks(suite: &str, dims: Vec<usize>, trials: usize, seed: u64, checks: Vec<CheckSummary>) -> Self {
        let violations = checks.iter().map(|c| c.violations).sum();
        let worst = checks.iter().min_by(|a, b| a.worst_margin.total_cmp(&b.worst_margin));
        SuiteReport {
            schema: crate::SCHEMA,
            suite: suite.to_string(),
            dims,
            trials,
            seed,
            violations,
            worst_margin: worst.map_or(f64::INFINITY, |c| c.worst_margin),
            witness: worst.and_then(|c| c.witness.clone()),
            checks,
            notes: Vec::new(),
        }
    }

    /// Concatenates suites run with the same seed.
    pub fn combine(suite: &str, parts: Vec<SuiteReport>) -> SuiteReport {
        let seed = parts.first().map_or(0, |p| p.seed);
        let mut dims: Vec<usize> = parts.iter().flat_map(|p| p.dims.iter().copied()).collect();
        dims.sort_unstable();
        dims.dedup();
        let trials = parts.iter().map(|p| p.trials).max().unwrap_or(0);
        let notes: Vec<String> = parts.iter().flat_map(|p| p.notes.iter().cloned()).collect();
        let checks = parts.into_iter().flat_map(|p| p.checks).collect();
        let mut report = SuiteReport::from_checks(suite, dims, trials, seed, checks);
        report.notes = notes;
        report
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Independent stream for trial `trial` of suite `tag` in dimension `n`.
fn trial_rng(seed: u64, tag: u64, n: usize, trial: usize) -> StreamRng {
    sampling::stream(seed, Purpose::Suite, (tag << 48) | ((n as u64) << 32) | trial as u64)
}

/// Unit lower-triangular matrix with `|alpha| <= 1`: a quarter of the entries
/// sit on the unit circle, the rest are uniform in the disc.
fn random_unit_lower(rng: &mut StreamRng, n: usize) -> CMatrix {
    CMatrix::unit_lower(n, |_, _| {
        if rng.random::<f64>() < 0.25 {
            sampling::unit_phase(rng)
        } else {
            sampling::unit_disc(rng)
        }
    })
}

fn all_minus_one(n: usize) -> CMatrix {
    CMatrix::unit_lower(n, |_, _| Complex64::new(-1.0, 0.0))
}

fn matrix_json(m: &CMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

#[cfg(test)]
mod tests;
