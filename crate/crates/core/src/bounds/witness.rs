use rand::seq::SliceRandom;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::frame::Normalizer;
use crate::numerics::{CMatrix, CVector, Complex64};
use crate::planar::{PlanarRiemannMap, PlanarShape};
use crate::sampling::{self, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Polydisc,
    /// The polydisc witness scaled by `1 / sqrt(n)`, landing in the unit ball.
    Ball,
}

/// `z -> (phi_1((A T z)_1), ..., phi_n((A T z)_n))`, optionally scaled into the ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessMap {
    pub composite: CMatrix,
    #[serde(skip)]
    composite_inverse: CMatrix,
    pub coordinate_maps: Vec<PlanarRiemannMap>,
    pub target: Target,
}

impl WitnessMap {
    pub fn new(composite: CMatrix, coordinate_maps: Vec<PlanarRiemannMap>, target: Target) -> Result<Self> {
        let n = composite.dim();
        if coordinate_maps.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: coordinate_maps.len() });
        }
        let columns = (0..n).map(|k| composite.solve(&CVector::basis(n, k))).collect::<Result<Vec<_>>>()?;
        let composite_inverse = CMatrix::from_columns(&columns)?;
        Ok(WitnessMap { composite, composite_inverse, coordinate_maps, target })
    }

    /// Cayley map on every coordinate: the convex-class witness.
    pub fn cayley(normalizer: &Normalizer, target: Target) -> Result<Self> {
        let psi = PlanarRiemannMap::new(PlanarShape::HalfPlane)?;
        Self::new(normalizer.composite.clone(), vec![psi; normalizer.dim()], target)
    }

    pub fn with_target(&self, target: Target) -> Self {
        WitnessMap { target, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.composite.dim()
    }

    fn scale(&self) -> f64 {
        match self.target {
            Target::Polydisc => 1.0,
            Target::Ball => 1.0 / (self.dim() as f64).sqrt(),
        }
    }

    /// Preimage in `D`-coordinates of an image point, if it has one.
    pub fn pull_back(&self, w: &CVector) -> Option<CVector> {
        let s = self.scale();
        let u: Option<CVector> =
            w.iter().zip(&self.coordinate_maps).map(|(&c, m)| m.inverse(c / s).ok()).collect();
        Some(self.composite_inverse.apply(&u?))
    }

    /// Membership in `W(D)`.
    pub fn image_contains(&self, d: &DomainSpec, w: &CVector) -> bool {
        self.pull_back(w).is_some_and(|z| d.contains_unchecked(&z))
    }
}

/// Evaluates the witness at a point of `D`.
pub fn witness_eval(w: &WitnessMap, z: &CVector) -> Result<CVector> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: z.dim() });
    }
    let u = w.composite.apply(z);
    let s = w.scale();
    u.iter()
        .zip(&w.coordinate_maps)
        .enumerate()
        .map(|(j, (&c, m))| {
            m.forward(c).map(|v| v * s).map_err(|_| Error::PipelineCheck {
                check: format!("coordinate {j} of A T z lies outside its planar domain"),
                margin: f64::NAN,
            })
        })
        .collect()
}

/// Circle fitted to a projection cloud.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscFit {
    pub center: Complex64,
    /// `|1 - center|`; the fit requires 1 on the circle.
    pub radius: f64,
    /// Radius of the smallest circle enclosing the cloud.
    pub enclosing_radius: f64,
    /// Fraction of angular bins holding a point near the circle.
    pub coverage: f64,
}

/// One coordinate projection `pi_j(A T D)`, summarized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarProjection {
    pub index: usize,
    pub samples: usize,
    /// Farthest cloud point from the fitted centre in each angular bin.
    pub hull_samples: Vec<Complex64>,
    /// Distance from 1 to the nearest cloud point.
    pub distance_to_one: f64,
    pub fit: Option<DiscFit>,
    pub matched: Option<PlanarShape>,
}

pub const PROJECTION_BINS: usize = 32;
pub const FIT_TOL: f64 = 1e-3;
const RING: f64 = 1e-2;

/// Coordinate clouds of `A T D` from interior samples of `D`, each matched
/// against a disc through 1.
pub fn planar_projections(d: &DomainSpec, normalizer: &Normalizer, samples: usize, seed: u64) -> Result<Vec<PlanarProjection>> {
    let n = d.dim();
    let mut rng = sampling::stream(seed, Purpose::Projection, 0);
    let mut clouds: Vec<Vec<Complex64>> = vec![Vec::with_capacity(samples); n];
    for _ in 0..samples {
        let z = d.sample_interior(&mut rng)?;
        let w = normalizer.composite.apply(&z);
        for (cloud, c) in clouds.iter_mut().zip(w.iter()) {
            cloud.push(*c);
        }
    }
    clouds.into_iter().enumerate().map(|(index, cloud)| Ok(summarize(index, cloud, seed))).collect()
}

fn summarize(index: usize, mut cloud: Vec<Complex64>, seed: u64) -> PlanarProjection {
    let one = Complex64::new(1.0, 0.0);
    let samples = cloud.len();
    let distance_to_one = cloud.iter().map(|c| (c - one).norm()).fold(f64::INFINITY, f64::min);
    let mut rng = sampling::stream(seed, Purpose::Projection, 1 + index as u64);
    cloud.shuffle(&mut rng);
    let (center, enclosing_radius) = enclosing_circle(&cloud);
    let radius = (one - center).norm();

    let mut far = vec![None::<Complex64>; PROJECTION_BINS];
    for &p in &cloud {
        let bin = bin_of(p - center);
        if far[bin].is_none_or(|q| (q - center).norm() < (p - center).norm()) {
            far[bin] = Some(p);
        }
    }
    let covered = far.iter().flatten().filter(|p| (**p - center).norm() >= radius * (1.0 - RING)).count();
    let coverage = covered as f64 / PROJECTION_BINS as f64;
    let fit = DiscFit { center, radius, enclosing_radius, coverage };
    let matched = ((enclosing_radius - radius).abs() <= FIT_TOL * radius && coverage == 1.0 && center.norm() < radius)
        .then_some(PlanarShape::Disc { center, radius });
    PlanarProjection { index, samples, hull_samples: far.into_iter().flatten().collect(), distance_to_one, fit: Some(fit), matched }
}

fn bin_of(v: Complex64) -> usize {
    let t = (v.arg() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
    ((t * PROJECTION_BINS as f64) as usize).min(PROJECTION_BINS - 1)
}

/// Smallest enclosing circle (Welzl, iterative; expects shuffled input).
pub fn enclosing_circle(points: &[Complex64]) -> (Complex64, f64) {
    let eps = 1e-12;
    let inside = |c: Complex64, r: f64, p: Complex64| (p - c).norm() <= r * (1.0 + eps) + eps;
    let Some(&first) = points.first() else {
        return (Complex64::new(0.0, 0.0), 0.0);
    };
    let (mut c, mut r) = (first, 0.0);
    for i in 1..points.len() {
        if inside(c, r, points[i]) {
            continue;
        }
        c = points[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, points[j]) {
                continue;
            }
            c = (points[i] + points[j]) * 0.5;
            r = (points[i] - c).norm();
            for k in 0..j {
                if inside(c, r, points[k]) {
                    continue;
                }
                (c, r) = circumcircle(points[i], points[j], points[k]);
            }
        }
    }
    (c, r)
}

fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, f64) {
    let (b, c) = (b - a, c - a);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    if d.abs() < 1e-300 {
        // collinear: the widest pair
        let pairs = [(a, a + b), (a, a + c), (a + b, a + c)];
        let (p, q) = pairs.into_iter().max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm())).unwrap();
        return ((p + q) * 0.5, (p - q).norm() * 0.5);
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * bb - b.im * cc) / d;
    let uy = (b.re * cc - c.re * bb) / d;
    let u = Complex64::new(ux, uy);
    (u + a, u.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosing_circle_of_disc_samples() {
        let mut rng = sampling::stream(0, Purpose::Suite, 0);
        let centre = Complex64::new(-1.0, 0.5);
        let mut pts: Vec<Complex64> = (0..5000).map(|_| centre + sampling::unit_disc(&mut rng) * 2.0).collect();
        pts.shuffle(&mut rng);
        let (c, r) = enclosing_circle(&pts);
        assert!((c - centre).norm() < 0.05 && (r - 2.0).abs() < 0.05);
        for p in &pts {
            assert!((p - c).norm() <= r * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn circumcircle_of_right_triangle() {
        let (c, r) = circumcircle(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0));
        assert!((c - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }
}
