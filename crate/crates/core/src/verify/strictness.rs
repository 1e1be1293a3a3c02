use serde_json::json;

use super::{CheckSummary, SuiteReport};
use crate::bounds::{certify, CertifyConfig};
use crate::domains::DomainSpec;
use crate::error::Result;

/// For each fixture: no row of `A` below the first has every entry on the unit
/// circle, and the measured witness radii exceed the certified constants.
/// Fixtures without a witness contribute only the row check.
pub fn suite_strictness(fixtures: &[(String, DomainSpec)], config: &CertifyConfig) -> Result<SuiteReport> {
    let mut rows = CheckSummary::new("row_gap", None);
    let mut witness = CheckSummary::new("witness_excess", None);
    let mut skipped = Vec::new();
    for (name, d) in fixtures {
        let report = match certify(d, config) {
            Ok(r) => r,
            Err(e) => {
                rows.record(f64::NEG_INFINITY, true, || json!({ "fixture": name, "error": e.to_string() }));
                continue;
            }
        };
        let gap = report.margins.normalizer.row_gaps.iter().copied().fold(f64::INFINITY, f64::min);
        rows.record(gap, !(gap > 0.0), || json!({ "fixture": name, "row_gaps": report.margins.normalizer.row_gaps }));
        match (report.witness_bound_s, report.witness_bound_s_hat) {
            (Some(s), Some(s_hat)) => {
                let excess = (s - report.certified_universal_s).min(s_hat - report.certified_universal_s_hat);
                witness.record(excess, !(excess > 0.0), || {
                    json!({ "fixture": name, "witness_s": s, "witness_s_hat": s_hat,
                            "certified_s": report.certified_universal_s, "certified_s_hat": report.certified_universal_s_hat })
                });
            }
            _ => skipped.push(format!("{name}: {}", report.witness_absent.as_deref().unwrap_or("no witness"))),
        }
    }
    let dims = {
        let mut v: Vec<usize> = fixtures.iter().map(|(_, d)| d.dim()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut report = SuiteReport::from_checks("strictness", dims, fixtures.len(), config.seed, vec![rows, witness]);
    report.notes = skipped;
    Ok(report)
}
