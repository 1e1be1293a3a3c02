use rayon::prelude::*;
use serde_json::json;

use super::{all_minus_one, matrix_json, random_unit_lower, trial_rng, CheckSummary, SuiteConfig, SuiteReport};
use crate::error::Result;
use crate::numerics::{inverse_coefficients, symbolic_inverse, CMatrix, CVector, SYMBOLIC_MAX_N};
use crate::sampling;

const TAG: u64 = 1;

/// Coefficient structure of `A^-1` for unit lower-triangular `A` with
/// `|alpha| <= 1`: monomial counts `2^(j-k-1)` (symbolically, `n <= 8`),
/// `|c_{j,k}| <= 2^(j-k-1)` and `sum |w_j| <= sum 2^(n-j) |Z_j|` on random
/// inputs, and equality for the all-(-1) matrix.
pub fn suite_star(dims: &[usize], config: &SuiteConfig) -> Result<SuiteReport> {
    let SuiteConfig { trials, seed, tol, .. } = *config;
    let mut checks = Vec::new();
    for &n in dims {
        if n <= SYMBOLIC_MAX_N {
            checks.push(symbolic_counts(n)?);
        }
        checks.push(all_minus_one_equality(n)?);
        let results: Vec<(f64, f64, CMatrix, CVector)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, TAG, n, t);
                let a = random_unit_lower(&mut rng, n);
                let z = sampling::unit_sphere(&mut rng, n);
                let c = inverse_coefficients(&a)?;
                Ok((coefficient_margin(&c), sum_bound_margin(&c, &z), a, z))
            })
            .collect::<Result<_>>()?;
        let mut coeff = CheckSummary::new("coefficient_bound", Some(n));
        let mut sum = CheckSummary::new("sum_bound", Some(n));
        for (cm, sm, a, z) in &results {
            coeff.record_margin(*cm, tol, || json!({ "a": matrix_json(a) }));
            sum.record_margin(*sm, tol, || json!({ "a": matrix_json(a), "z": z }));
        }
        checks.push(coeff);
        checks.push(sum);
    }
    Ok(SuiteReport::from_checks("star", dims.to_vec(), trials, seed, checks))
}

fn chain_count(j: usize, k: usize) -> f64 {
    2f64.powi((j - k - 1) as i32)
}

/// `min (2^(j-k-1) - |c_{j,k}|) / 2^(j-k-1)` over the strict lower triangle.
pub(super) fn coefficient_margin(c: &CMatrix) -> f64 {
    let n = c.dim();
    let mut m = f64::INFINITY;
    for j in 1..n {
        for k in 0..j {
            let b = chain_count(j, k);
            m = m.min((b - c.get(j, k).norm()) / b);
        }
    }
    m
}

/// Relative slack of `sum |w_j| <= sum 2^(n-j) |Z_j|` for `w = A^-1 Z`.
fn sum_bound_margin(c: &CMatrix, z: &CVector) -> f64 {
    let n = z.dim();
    let w = c.apply(z);
    let rhs: f64 = (0..n).map(|j| 2f64.powi((n - 1 - j) as i32) * z[j].norm()).sum();
    (rhs - w.norm_l1()) / rhs
}

fn symbolic_counts(n: usize) -> Result<CheckSummary> {
    let inverse = symbolic_inverse(n)?;
    let mut check = CheckSummary::new("symbolic_counts", Some(n));
    for j in 1..n {
        for k in 0..j {
            let count = inverse[j][k].monomial_count();
            let expected = 1usize << (j - k - 1);
            let margin = if count == expected { 0.0 } else { -(count.abs_diff(expected) as f64) };
            check.record(margin, count != expected, || json!({ "row": j + 1, "col": k + 1, "count": count, "expected": expected }));
        }
    }
    Ok(check)
}

/// Every coefficient of the all-(-1) inverse equals its chain count exactly,
/// and the sum bound is attained at `Z = (1, ..., 1)`.
fn all_minus_one_equality(n: usize) -> Result<CheckSummary> {
    let a = all_minus_one(n);
    let c = inverse_coefficients(&a)?;
    let mut check = CheckSummary::new("all_minus_one_equality", Some(n));
    let exact = (1..n).all(|j| (0..j).all(|k| c.get(j, k) == crate::numerics::Complex64::new(chain_count(j, k), 0.0)));
    let ones = CVector::from_reals(&vec![1.0; n]);
    let margin = sum_bound_margin(&c, &ones);
    check.record(margin, !exact || margin.abs() > 1e-12, || json!({ "inverse": matrix_json(&c) }));
    Ok(check)
}

