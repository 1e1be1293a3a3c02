use serde::Serialize;

use super::inscribed::{inscribed_radius_estimate, InscribedEstimate};
use super::shapes::{containment_check, ContainmentReport, Outer, ShapeDescriptor, ShapeKind};
use super::witness::{planar_projections, witness_eval, PlanarProjection, Target, WitnessMap};
use crate::domains::{midpoint_convexity_check, ConvexityCheck, ConvexityClass, DomainSpec, ExitStrategy};
use crate::error::{Error, Result};
use crate::frame::{build_frame, build_normalizer, FrameDump, FrankelFrame, Normalizer, NormalizerChecks, SearchConfig};
use crate::numerics::{c_const, universal_bounds, CMatrix, CVector};
use crate::planar::PlanarRiemannMap;
use crate::sampling::{self, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyConfig {
    pub seed: u64,
    /// Samples per sampled check (hyperplane images, containments, target).
    pub samples: usize,
    /// Ray directions of each inscribed-radius estimate.
    pub rays: usize,
    /// Interior samples behind each coordinate projection cloud.
    pub projection_samples: usize,
    pub starts_per_dim: usize,
    /// Slack below zero tolerated by the sampled simplex-image containments.
    pub tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { seed: 0, samples: 1000, rays: 4000, projection_samples: 100_000, starts_per_dim: 64, tol: 1e-10 }
    }
}

/// Sampled witness-image radii. Empirical, not certified.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSummary {
    pub label: &'static str,
    pub polydisc: InscribedEstimate,
    pub ball: InscribedEstimate,
    /// Interior samples of `D` whose witness image left the open polydisc target.
    pub target_violations: usize,
    pub target_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageEstimate {
    pub stage: &'static str,
    #[serde(flatten)]
    pub estimate: InscribedEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineMargins {
    pub normalizer: NormalizerChecks,
    /// `min (1 - |A^-1 w|_1)` over `|w| = 1/c_n`: stays positive unless a row of
    /// `A` has every entry on the unit circle.
    pub ball_in_simplex_image: ContainmentReport,
    /// Same for the polydisc of radius `1 / (2^n - 1)`.
    pub polydisc_in_simplex_image: ContainmentReport,
    pub midpoint_convexity: Option<ConvexityCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub n: usize,
    pub class: ConvexityClass,
    /// Lower bound for the squeezing function at the base point (ball target).
    pub certified_universal_s: f64,
    /// Lower bound for the polydisc-target squeezing function.
    pub certified_universal_s_hat: f64,
    pub witness_bound_s: Option<f64>,
    pub witness_bound_s_hat: Option<f64>,
    pub witness: Option<WitnessSummary>,
    /// Why no witness was built, when it was not.
    pub witness_absent: Option<String>,
    pub inscribed_estimates: Vec<StageEstimate>,
    pub frame: FrameDump,
    pub margins: PipelineMargins,
    pub projections: Option<Vec<PlanarProjection>>,
    /// Frame searches whose starts disagreed by more than 1e-3 after polishing.
    pub search_flags: Vec<usize>,
    pub seed: u64,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Frame, normalizer and witness of a domain containing the origin, together
/// with the class's universal bounds.
pub fn certify(d: &DomainSpec, config: &CertifyConfig) -> Result<BoundReport> {
    let n = d.dim();
    if n < 2 {
        return Err(Error::Domain("certification needs n >= 2".into()));
    }
    if !d.contains(&CVector::zeros(n))? {
        return Err(Error::NotInterior);
    }
    let class = d.class();
    let midpoint_convexity = if class == ConvexityClass::Convex {
        let check = midpoint_convexity_check(d, config.samples, config.seed)?;
        if !check.passed() {
            return Err(Error::ClassMismatch(format!(
                "declared convex but {} of {} midpoints fell outside",
                check.failures, check.trials
            )));
        }
        Some(check)
    } else {
        None
    };

    let search = SearchConfig { starts_per_dim: config.starts_per_dim, seed: config.seed };
    let frame = build_frame(d, &search)?;
    let normalizer = build_normalizer(d, &frame, config.seed)?;
    let checks = normalizer.checks(d, &frame, config.samples, config.seed)?;
    require(checks.contact_images <= 1e-9, "T a_j = e_j", checks.contact_images)?;
    require(checks.hyperplane_images <= 1e-8, "hyperplane images", checks.hyperplane_images)?;
    require(checks.l1_violations == 0, "l1 ball inside T(D)", checks.l1_violations as f64)?;
    require(checks.disc_violations == 0, "coordinate discs inside T(D)", checks.disc_violations as f64)?;
    require(checks.alpha_max <= 1.0 + crate::frame::ALPHA_TOL, "|alpha| <= 1", checks.alpha_max)?;

    let (ball_margin, polydisc_margin) = simplex_image_margins(&normalizer, config)?;
    require(ball_margin.passed(config.tol), "ball of radius 1/c_n inside A(simplex)", ball_margin.min_slack)?;
    require(polydisc_margin.passed(config.tol), "polydisc of radius 1/(2^n-1) inside A(simplex)", polydisc_margin.min_slack)?;

    let constants = universal_bounds(n as u32)?;
    let (certified_s, certified_s_hat) = constants.for_class(class);

    let mut inscribed_estimates = vec![StageEstimate {
        stage: "domain",
        estimate: inscribed_radius_estimate(
            |z| d.contains_unchecked(z),
            n,
            ShapeKind::Ball,
            config.rays,
            config.seed,
            d.bounding_radius(),
            d.exit_strategy(),
        )?,
    }];

    let (witness, projections, witness_absent) = match class {
        ConvexityClass::Convex => (Some(WitnessMap::cayley(&normalizer, Target::Polydisc)?), None, None),
        ConvexityClass::CConvex => {
            let projections = planar_projections(d, &normalizer, config.projection_samples, config.seed)?;
            let maps: Option<Vec<PlanarRiemannMap>> = projections
                .iter()
                .map(|p| p.matched.clone().and_then(|s| PlanarRiemannMap::new(s).ok()))
                .collect();
            match maps {
                Some(maps) => (Some(WitnessMap::new(normalizer.composite.clone(), maps, Target::Polydisc)?), Some(projections), None),
                None => {
                    let unmatched: Vec<String> =
                        projections.iter().filter(|p| p.matched.is_none()).map(|p| p.index.to_string()).collect();
                    let why = format!("projections {} match no catalog shape", unmatched.join(", "));
                    (None, Some(projections), Some(why))
                }
            }
        }
    };

    let witness_summary = match &witness {
        Some(w) => Some(summarize_witness(d, w, config)?),
        None => None,
    };
    if let Some(s) = &witness_summary {
        inscribed_estimates.push(StageEstimate { stage: "witness_polydisc", estimate: s.polydisc.clone() });
        inscribed_estimates.push(StageEstimate { stage: "witness_ball", estimate: s.ball.clone() });
    }

    let search_flags = frame.searches.iter().enumerate().filter(|(_, s)| s.starts_disagree).map(|(j, _)| j).collect();
    let dump = FrameDump::new(d, &frame, &normalizer, checks.clone());
    Ok(BoundReport {
        schema: crate::SCHEMA,
        n,
        class,
        certified_universal_s: certified_s,
        certified_universal_s_hat: certified_s_hat,
        witness_bound_s: witness_summary.as_ref().map(|s| s.ball.upper),
        witness_bound_s_hat: witness_summary.as_ref().map(|s| s.polydisc.upper),
        witness: witness_summary,
        witness_absent,
        inscribed_estimates,
        frame: dump,
        margins: PipelineMargins {
            normalizer: checks,
            ball_in_simplex_image: ball_margin,
            polydisc_in_simplex_image: polydisc_margin,
            midpoint_convexity,
        },
        projections,
        search_flags,
        seed: config.seed,
    })
}

/// Runs the two pieces of certification downstream code needs on their own.
pub fn frame_and_normalizer(d: &DomainSpec, config: &CertifyConfig) -> Result<(FrankelFrame, Normalizer)> {
    let search = SearchConfig { starts_per_dim: config.starts_per_dim, seed: config.seed };
    let frame = build_frame(d, &search)?;
    let normalizer = build_normalizer(d, &frame, config.seed)?;
    Ok((frame, normalizer))
}

fn require(ok: bool, check: &str, margin: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::PipelineCheck { check: check.to_string(), margin })
    }
}

/// `c D ⊂ A(simplex)` checked as `c A^-1(D) ⊂ simplex`, for the ball of radius
/// `1/c_n` and the polydisc of radius `1/(2^n - 1)`, with the extremal probes.
pub fn simplex_image_margins(normalizer: &Normalizer, config: &CertifyConfig) -> Result<(ContainmentReport, ContainmentReport)> {
    simplex_image_margins_for(&normalizer.a, config.samples, config.seed)
}

pub fn simplex_image_margins_for(a: &CMatrix, samples: usize, seed: u64) -> Result<(ContainmentReport, ContainmentReport)> {
    let n = a.dim();
    let columns = (0..n).map(|k| a.solve(&CVector::basis(n, k))).collect::<Result<Vec<_>>>()?;
    let inverse = CMatrix::from_columns(&columns)?;
    let simplex = ShapeDescriptor::simplex(n, 1.0)?;
    let (ball_probes, polydisc_probes) = extremal_probes(&inverse);
    let ball = ShapeDescriptor::ball(n, 1.0 / c_const(n as u32)?)?;
    let ball_report = containment_check(&ball, &inverse, Outer::Shape(&simplex), samples, seed, &ball_probes)?;
    let polydisc = ShapeDescriptor::polydisc(n, 1.0 / (2f64.powi(n as i32) - 1.0))?;
    let polydisc_report = containment_check(&polydisc, &inverse, Outer::Shape(&simplex), samples, seed ^ 1, &polydisc_probes)?;
    Ok((ball_report, polydisc_report))
}

/// Unit-boundary points where `|A^-1 w|_1` is largest for the ball and the
/// polydisc: the phase-aligned column-sum direction and the phase-aligned
/// torus point, computed row by row from the actual inverse.
pub fn extremal_probes(inverse: &CMatrix) -> (Vec<CVector>, Vec<CVector>) {
    let n = inverse.dim();
    let mut ball = Vec::new();
    let mut polydisc = Vec::new();
    // for each output phase pattern that aligns coordinate j, the maximizer of
    // Re sum_j conj(u_j) (A^-1 w)_j is w = (A^-1)^H u normalized in the right norm
    for anchor in 0..n {
        let u: CVector = (0..n)
            .map(|j| {
                let c = inverse.get(j, anchor);
                if c.norm() > 0.0 {
                    c / c.norm()
                } else {
                    crate::numerics::Complex64::new(1.0, 0.0)
                }
            })
            .collect();
        let g = inverse.conj_transpose().apply(&u);
        if let Some(b) = g.normalized() {
            ball.push(b);
        }
        polydisc.push(g.map(|c| if c.norm() > 0.0 { c / c.norm() } else { c }));
    }
    (ball, polydisc)
}

fn summarize_witness(d: &DomainSpec, w: &WitnessMap, config: &CertifyConfig) -> Result<WitnessSummary> {
    let n = d.dim();
    let mut rng = sampling::stream(config.seed, Purpose::Pipeline, 0);
    let mut target_violations = 0;
    for _ in 0..config.samples {
        let z = d.sample_interior(&mut rng)?;
        match witness_eval(w, &z) {
            Ok(v) if v.norm_sup() < 1.0 => {}
            _ => target_violations += 1,
        }
    }
    let strategy = match d.exit_strategy() {
        ExitStrategy::Doubling => ExitStrategy::Doubling,
        ExitStrategy::March { .. } => ExitStrategy::march_for(1.0),
    };
    let polydisc_map = w.with_target(Target::Polydisc);
    let polydisc = inscribed_radius_estimate(
        |v| polydisc_map.image_contains(d, v),
        n,
        ShapeKind::Polydisc,
        config.rays,
        config.seed,
        (n as f64).sqrt(),
        strategy,
    )?;
    let ball_map = w.with_target(Target::Ball);
    let ball = inscribed_radius_estimate(
        |v| ball_map.image_contains(d, v),
        n,
        ShapeKind::Ball,
        config.rays,
        config.seed,
        1.0,
        strategy,
    )?;
    Ok(WitnessSummary { label: "empirical", polydisc, ball, target_violations, target_samples: config.samples })
}
