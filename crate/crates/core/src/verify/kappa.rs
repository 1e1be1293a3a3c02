use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{certify, CertifyConfig};
use crate::domains::{ConvexityClass, DomainSpec};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::numerics::{universal_bounds, CVector, Complex64};
use crate::sampling::{self, Purpose};

/// Parameterized domain families the probe sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// The unit ball, at varying base points.
    Ball,
    /// Polydiscs under a unit lower-triangular shear, `|shear| <= 2`.
    Shears,
    /// Images of the polydisc under `z -> z / (pole - z1)`, with `pole - sqrt(n)`
    /// in `[0.1, 2.6]` so the denominator provably stays away from zero.
    Projective,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ball" => Ok(Family::Ball),
            "shears" => Ok(Family::Shears),
            "projective" => Ok(Family::Projective),
            other => Err(Error::Parse(format!("unknown family `{other}` (ball, shears, projective)"))),
        }
    }
}

impl Family {
    fn default_class(self) -> ConvexityClass {
        match self {
            Family::Ball | Family::Shears => ConvexityClass::Convex,
            Family::Projective => ConvexityClass::CConvex,
        }
    }

    /// Member `index` of `budget`: the first half sit on a parameter grid at
    /// the origin, the rest are random parameters at random base points.
    fn member(self, n: usize, index: usize, budget: usize, seed: u64) -> Result<(Value, DomainSpec, CVector)> {
        let grid = budget.div_ceil(2);
        let mut rng = sampling::stream(seed, Purpose::Probe, index as u64);
        let on_grid = index < grid;
        let t = if grid > 1 { index as f64 / (grid - 1) as f64 } else { 0.0 };
        let (params, d) = match self {
            Family::Ball => (json!({}), DomainSpec::ball(n)?),
            Family::Shears => {
                let shear = if on_grid { Complex64::new(-2.0 + 4.0 * t, 0.0) } else { sampling::unit_disc(&mut rng) * 2.0 };
                (json!({ "shear": [shear.re, shear.im] }), fixtures::sheared_polydisc(n, shear)?)
            }
            Family::Projective => {
                let u = if on_grid { t } else { rng.random::<f64>() };
                let pole = (n as f64).sqrt() + 0.1 + 2.5 * u;
                (json!({ "pole": pole }), fixtures::projective_polydisc(n, pole)?)
            }
        };
        let base = if on_grid {
            CVector::zeros(n)
        } else {
            d.sample_interior(&mut rng)?.scale(0.5 * rng.random::<f64>())
        };
        Ok((params, d, base))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeMember {
    pub index: usize,
    pub params: Value,
    pub base_point: CVector,
    pub witness_s: Option<f64>,
    pub witness_s_hat: Option<f64>,
    /// Set when the pipeline failed on this member.
    pub error: Option<String>,
}

/// Smallest bounds seen over a family sweep. The minima are upper estimates
/// of the infima over the class, never the infima themselves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaProbeReport {
    pub schema: &'static str,
    pub family: Family,
    pub n: usize,
    pub class: ConvexityClass,
    pub budget: usize,
    pub seed: u64,
    pub certified_s: f64,
    pub certified_s_hat: f64,
    pub min_witness_s: Option<f64>,
    pub min_witness_s_hat: Option<f64>,
    pub argmin_s: Option<usize>,
    pub argmin_s_hat: Option<usize>,
    /// Members whose witness radius did not exceed the certified constant.
    pub violations: usize,
    pub errors: usize,
    pub members: Vec<ProbeMember>,
}

impl KappaProbeReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Sweeps `budget` members of `family` in `C^n`, recentering each at its base
/// point and certifying there.
pub fn kappa_probe(
    family: Family,
    n: usize,
    budget: usize,
    class: Option<ConvexityClass>,
    config: &CertifyConfig,
) -> Result<KappaProbeReport> {
    if budget == 0 {
        return Err(Error::Domain("budget must be at least 1".into()));
    }
    let class = class.unwrap_or(family.default_class());
    let (certified_s, certified_s_hat) = universal_bounds(n as u32)?.for_class(class);
    let members: Vec<ProbeMember> = (0..budget)
        .into_par_iter()
        .map(|index| {
            let (params, d, base) = family.member(n, index, budget, config.seed)?;
            let outcome = d.with_class(class).and_then(|d| d.recentered(&base)).and_then(|d| certify(&d, config));
            Ok(match outcome {
                Ok(r) => ProbeMember {
                    index,
                    params,
                    base_point: base,
                    witness_s: r.witness_bound_s,
                    witness_s_hat: r.witness_bound_s_hat,
                    error: None,
                },
                Err(e) => ProbeMember { index, params, base_point: base, witness_s: None, witness_s_hat: None, error: Some(e.to_string()) },
            })
        })
        .collect::<Result<_>>()?;

    let argmin = |key: fn(&ProbeMember) -> Option<f64>| {
        members
            .iter()
            .filter_map(|m| key(m).map(|v| (m.index, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
    };
    let min_s = argmin(|m| m.witness_s);
    let min_s_hat = argmin(|m| m.witness_s_hat);
    let violations = members
        .iter()
        .filter(|m| m.witness_s.is_some_and(|v| !(v > certified_s)) || m.witness_s_hat.is_some_and(|v| !(v > certified_s_hat)))
        .count();
    let errors = members.iter().filter(|m| m.error.is_some()).count();
    Ok(KappaProbeReport {
        schema: crate::SCHEMA,
        family,
        n,
        class,
        budget,
        seed: config.seed,
        certified_s,
        certified_s_hat,
        min_witness_s: min_s.map(|p| p.1),
        min_witness_s_hat: min_s_hat.map(|p| p.1),
        argmin_s: min_s.map(|p| p.0),
        argmin_s_hat: min_s_hat.map(|p| p.0),
        violations,
        errors,
        members,
    })
}
