use rand::Rng;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector};
use crate::sampling::{self, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Ball,
    Polydisc,
    /// `{sum |w_j| < r}`.
    Simplex,
}

impl ShapeKind {
    /// Norm whose unit ball is the shape.
    pub fn gauge(self, w: &CVector) -> f64 {
        match self {
            ShapeKind::Ball => w.norm(),
            ShapeKind::Polydisc => w.norm_sup(),
            ShapeKind::Simplex => w.norm_l1(),
        }
    }

    pub(crate) fn sample_boundary<R: Rng>(self, rng: &mut R, n: usize) -> CVector {
        match self {
            ShapeKind::Ball => sampling::unit_sphere(rng, n),
            ShapeKind::Polydisc => sampling::polydisc_boundary(rng, n),
            ShapeKind::Simplex => sampling::simplex_boundary(rng, n),
        }
    }
}

/// `M (r K)` for a unit ball `K` of one of the three norms and an optional
/// invertible linear map `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeDescriptor {
    pub kind: ShapeKind,
    pub n: usize,
    pub radius: f64,
    pub matrix: Option<CMatrix>,
    #[serde(skip)]
    inverse: Option<CMatrix>,
}

impl ShapeDescriptor {
    pub fn new(kind: ShapeKind, n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("shape radius must be positive, got {radius}")));
        }
        Ok(ShapeDescriptor { kind, n, radius, matrix: None, inverse: None })
    }

    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        Self::new(ShapeKind::Ball, n, radius)
    }

    pub fn polydisc(n: usize, radius: f64) -> Result<Self> {
        Self::new(ShapeKind::Polydisc, n, radius)
    }

    pub fn simplex(n: usize, radius: f64) -> Result<Self> {
        Self::new(ShapeKind::Simplex, n, radius)
    }

    pub fn with_matrix(mut self, m: CMatrix) -> Result<Self> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: m.dim() });
        }
        let columns = (0..self.n).map(|k| m.solve(&CVector::basis(self.n, k))).collect::<Result<Vec<_>>>()?;
        self.inverse = Some(CMatrix::from_columns(&columns)?);
        self.matrix = Some(m);
        Ok(self)
    }

    /// `gauge(w) < 1` exactly on the open shape.
    pub fn gauge(&self, w: &CVector) -> f64 {
        let base = match &self.inverse {
            Some(inv) => self.kind.gauge(&inv.apply(w)),
            None => self.kind.gauge(w),
        };
        base / self.radius
    }

    pub fn contains(&self, w: &CVector) -> bool {
        self.gauge(w) < 1.0
    }

    fn place(&self, unit: &CVector) -> CVector {
        let p = unit.scale(self.radius);
        match &self.matrix {
            Some(m) => m.apply(&p),
            None => p,
        }
    }

    pub fn sample_boundary<R: Rng>(&self, rng: &mut R) -> CVector {
        self.place(&self.kind.sample_boundary(rng, self.n))
    }
}

/// Where `containment_check` sends the mapped points.
pub enum Outer<'a> {
    Shape(&'a ShapeDescriptor),
    Domain(&'a DomainSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub samples: usize,
    pub violations: usize,
    /// `min (1 - outer gauge)` over the mapped samples.
    pub min_slack: f64,
}

impl ContainmentReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.violations == 0 && self.min_slack >= -tol
    }

    pub fn merge(&mut self, other: &ContainmentReport) {
        self.samples += other.samples;
        self.violations += other.violations;
        self.min_slack = self.min_slack.min(other.min_slack);
    }
}

impl Default for ContainmentReport {
    fn default() -> Self {
        ContainmentReport { samples: 0, violations: 0, min_slack: f64::INFINITY }
    }
}

/// Samples the boundary of `inner` (shrunk by `1 - 1e-9`), maps each point
/// by `map`, and measures the outer gauge. `probes` are extra points, given
/// on the unit boundary of `inner`'s base shape, that are checked as well.
pub fn containment_check(
    inner: &ShapeDescriptor,
    map: &CMatrix,
    outer: Outer<'_>,
    samples: usize,
    seed: u64,
    probes: &[CVector],
) -> Result<ContainmentReport> {
    if map.dim() != inner.n {
        return Err(Error::DimensionMismatch { expected: inner.n, got: map.dim() });
    }
    let outer_n = match &outer {
        Outer::Shape(s) => s.n,
        Outer::Domain(d) => d.dim(),
    };
    if outer_n != inner.n {
        return Err(Error::DimensionMismatch { expected: inner.n, got: outer_n });
    }
    let origin = CVector::zeros(inner.n);
    let slack_of = |w: &CVector| -> f64 {
        match &outer {
            Outer::Shape(s) => 1.0 - s.gauge(w),
            Outer::Domain(d) => match d.ray_exit(&origin, w) {
                Ok(t) => 1.0 - w.norm() / t,
                Err(_) if w.norm() == 0.0 => 1.0,
                Err(_) => f64::NEG_INFINITY,
            },
        }
    };
    let mut rng = sampling::stream(seed, Purpose::Containment, inner.n as u64);
    let mut report = ContainmentReport::default();
    let shrink = 1.0 - 1e-9;
    let points = probes
        .iter()
        .map(|p| inner.place(p))
        .chain((0..samples).map(|_| inner.sample_boundary(&mut rng)))
        .collect::<Vec<_>>();
    for p in points {
        let w = map.apply(&p.scale(shrink));
        let slack = slack_of(&w);
        report.samples += 1;
        if slack <= 0.0 {
            report.violations += 1;
        }
        report.min_slack = report.min_slack.min(slack);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polydisc_in_simplex() {
        let inner = ShapeDescriptor::polydisc(2, 1.0 / 3.0).unwrap();
        let outer = ShapeDescriptor::simplex(2, 1.0).unwrap();
        let r = containment_check(&inner, &CMatrix::identity(2), Outer::Shape(&outer), 10_000, 0, &[]).unwrap();
        assert_eq!(r.violations, 0);
        assert!((r.min_slack - 1.0 / 3.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn ball_in_simplex() {
        let inner = ShapeDescriptor::ball(2, 5f64.sqrt().recip()).unwrap();
        let outer = ShapeDescriptor::simplex(2, 1.0).unwrap();
        let h = 0.5f64.sqrt();
        let probe = CVector::from_reals(&[h, h]);
        let r = containment_check(&inner, &CMatrix::identity(2), Outer::Shape(&outer), 1000, 0, &[probe]).unwrap();
        assert!((r.min_slack - (1.0 - (2.0f64 / 5.0).sqrt())).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn tight_triangular_case() {
        let n = 4;
        let a = CMatrix::unit_lower(n, |_, _| crate::numerics::Complex64::new(-1.0, 0.0));
        let inv = CMatrix::from_columns(
            &(0..n).map(|k| a.solve(&CVector::basis(n, k)).unwrap()).collect::<Vec<_>>(),
        )
        .unwrap();
        let r = 1.0 / (2f64.powi(n as i32) - 1.0);
        let inner = ShapeDescriptor::polydisc(n, r).unwrap();
        let outer = ShapeDescriptor::simplex(n, 1.0).unwrap();
        let probe = CVector::from_reals(&vec![1.0; n]);
        let rep = containment_check(&inner, &inv, Outer::Shape(&outer), 1000, 0, &[probe]).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.min_slack < 1e-8 && rep.min_slack > -1e-12, "{rep:?}");
    }

    #[test]
    fn linear_image_gauge() {
        let m = CMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        let s = ShapeDescriptor::ball(2, 1.0).unwrap().with_matrix(m).unwrap();
        assert!(s.contains(&CVector::from_reals(&[1.9, 0.0])));
        assert!(!s.contains(&CVector::from_reals(&[0.0, 1.1])));
        assert!((s.gauge(&CVector::from_reals(&[2.0, 0.0])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_as_outer() {
        let d = DomainSpec::l1ball(2).unwrap();
        let inner = ShapeDescriptor::polydisc(2, 0.5).unwrap();
        let r = containment_check(&inner, &CMatrix::identity(2), Outer::Domain(&d), 2000, 0, &[]).unwrap();
        assert!(r.passed(1e-10) && r.min_slack < 1e-3);
        let big = ShapeDescriptor::polydisc(2, 0.6).unwrap();
        assert!(!containment_check(&big, &CMatrix::identity(2), Outer::Domain(&d), 2000, 0, &[]).unwrap().passed(1e-10));
    }
}
