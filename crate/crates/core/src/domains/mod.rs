//! Test domains in `C^n` and the three oracles the pipeline uses:
//! membership, first exit along a ray, and the tangent functional at a
//! boundary point.
//!
//! Every domain is bounded (that is how nondegeneracy is enforced) and is
//! expected to contain the origin; [`DomainSpec::recentered`] moves any
//! interior point there.

mod checks;
mod exit;
mod expr;
mod json;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector};
use crate::sampling::{self, Purpose};

pub use checks::{midpoint_convexity_check, slice_connectivity_check, ConvexityCheck};
pub use exit::{first_exit, ExitStrategy};
pub use expr::Expr;
pub use json::{DomainSpecJson, MapJson, MatrixJson};

/// Default bound on the size of a domain.
pub const DEFAULT_BOUNDING_RADIUS: f64 = 1e6;

/// Distance from the boundary accepted for a boundary point.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Number of interior samples used to validate a tangent functional.
pub const FUNCTIONAL_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexityClass {
    Convex,
    #[serde(rename = "cconvex")]
    CConvex,
}

impl fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvexityClass::Convex => "convex",
            ConvexityClass::CConvex => "cconvex",
        })
    }
}

impl std::str::FromStr for ConvexityClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(ConvexityClass::Convex),
            "cconvex" => Ok(ConvexityClass::CConvex),
            other => Err(Error::Parse(format!("unknown class `{other}` (expected convex|cconvex)"))),
        }
    }
}

/// `z -> M z + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub matrix: CMatrix,
    pub offset: CVector,
    inverse: CMatrix,
}

impl AffineMap {
    pub fn new(matrix: CMatrix, offset: CVector) -> Result<Self> {
        let n = matrix.dim();
        if offset.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: offset.dim() });
        }
        let cols = (0..n).map(|k| matrix.solve(&CVector::basis(n, k))).collect::<Result<Vec<_>>>()?;
        let inverse = CMatrix::from_columns(&cols)?;
        Ok(AffineMap { matrix, offset, inverse })
    }

    pub fn apply(&self, z: &CVector) -> CVector {
        &self.matrix.apply(z) + &self.offset
    }

    pub fn invert(&self, w: &CVector) -> CVector {
        self.inverse.apply(&(w - &self.offset))
    }

    pub fn inverse_matrix(&self) -> &CMatrix {
        &self.inverse
    }
}

/// `z -> (M z + b) / (d0 + d . z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap {
    pub matrix: CMatrix,
    pub offset: CVector,
    pub denom_const: Complex64,
    pub denom_linear: CVector,
    /// `(inverse matrix, inverse offset, inverse denominator linear part, constant)`
    /// from inverting the homogeneous `(n+1) x (n+1)` matrix.
    inverse: Option<Box<(CMatrix, CVector, CVector, Complex64)>>,
}

impl ProjectiveMap {
    pub fn new(matrix: CMatrix, offset: CVector, denom_const: Complex64, denom_linear: CVector) -> Result<Self> {
        let n = matrix.dim();
        for v in [&offset, &denom_linear] {
            if v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
            }
        }
        let h = CMatrix::from_rows(
            (0..=n)
                .map(|i| {
                    if i < n {
                        (0..n).map(|k| matrix.get(i, k)).chain([offset[i]]).collect()
                    } else {
                        denom_linear.iter().copied().chain([denom_const]).collect()
                    }
                })
                .collect(),
        )?;
        let cols = (0..=n).map(|k| h.solve(&CVector::basis(n + 1, k))).collect::<Result<Vec<_>>>()?;
        let inv = CMatrix::from_columns(&cols)?;
        let inv_matrix = CMatrix::from_rows((0..n).map(|i| (0..n).map(|k| inv.get(i, k)).collect()).collect())?;
        let inv_offset: CVector = (0..n).map(|i| inv.get(i, n)).collect();
        let inv_linear: CVector = (0..n).map(|k| inv.get(n, k)).collect();
        let inverse = Some(Box::new((inv_matrix, inv_offset, inv_linear, inv.get(n, n))));
        Ok(ProjectiveMap { matrix, offset, denom_const, denom_linear, inverse })
    }

    pub fn denominator(&self, z: &CVector) -> Complex64 {
        self.denom_const + self.denom_linear.iter().zip(z.iter()).map(|(d, z)| d * z).sum::<Complex64>()
    }

    pub fn apply(&self, z: &CVector) -> CVector {
        let den = self.denominator(z);
        (&self.matrix.apply(z) + &self.offset).scale_c(1.0 / den)
    }

    /// `F^-1(w)`, itself projective; `None` where it sends `w` to infinity.
    pub fn invert(&self, w: &CVector) -> Option<CVector> {
        let (m, b, d, d0) = &**self.inverse.as_ref()?;
        let den = d0 + d.iter().zip(w.iter()).map(|(a, c)| a * c).sum::<Complex64>();
        let scale = d.norm() * w.norm() + d0.norm();
        if den.norm() <= 1e-14 * scale {
            return None;
        }
        let z = (&m.apply(w) + b).scale_c(1.0 / den);
        z.is_finite().then_some(z)
    }

    /// Complex Jacobian of `F` at `z`: `(M - F(z) d^T) / den(z)`.
    pub fn jacobian(&self, z: &CVector) -> CMatrix {
        let n = z.dim();
        let den = self.denominator(z);
        let f = self.apply(z);
        let rows = (0..n)
            .map(|i| (0..n).map(|k| (self.matrix.get(i, k) - f[i] * self.denom_linear[k]) / den).collect())
            .collect();
        CMatrix::from_rows(rows).expect("finite jacobian")
    }

    fn is_affine(&self) -> bool {
        self.denom_linear.iter().all(|d| *d == Complex64::new(0.0, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Ball,
    Polydisc,
    L1Ball,
    LpBall { p: f64 },
    AffineImage { base: Box<DomainSpec>, map: AffineMap },
    ProjectiveImage { base: Box<DomainSpec>, map: ProjectiveMap },
    DefiningFunction { rho: Expr, source: String },
}

impl DomainKind {
    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::Ball => "ball",
            DomainKind::Polydisc => "polydisc",
            DomainKind::L1Ball => "l1ball",
            DomainKind::LpBall { .. } => "lp_ball",
            DomainKind::AffineImage { .. } => "affine_image",
            DomainKind::ProjectiveImage { .. } => "projective_image",
            DomainKind::DefiningFunction { .. } => "defining_function",
        }
    }
}

/// A bounded domain in `C^n` with a declared convexity class.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    n: usize,
    kind: DomainKind,
    class: ConvexityClass,
    bounding_radius: f64,
}

/// Flavor of a tangent functional at a boundary point `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalFlavor {
    /// `Re<z, lambda> < Re<a, lambda>` on `D`: a real supporting hyperplane.
    RealSupporting,
    /// `<z, lambda> != <a, lambda>` on `D`: a complex hyperplane missing `D`.
    ComplexAvoiding,
}

impl FunctionalFlavor {
    pub fn for_class(class: ConvexityClass) -> Self {
        match class {
            ConvexityClass::Convex => FunctionalFlavor::RealSupporting,
            ConvexityClass::CConvex => FunctionalFlavor::ComplexAvoiding,
        }
    }
}

/// Hyperplane functional at a boundary point, normalized so that
/// `<a, lambda> = 1` (complex flavor) or `Re<a, lambda> = 1` (real flavor).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentFunctional {
    pub base_point: CVector,
    pub coefficients: CVector,
    pub flavor: FunctionalFlavor,
    /// Smallest slack observed over the validation samples.
    pub validation_margin: f64,
}

impl TangentFunctional {
    pub fn value(&self, z: &CVector) -> Complex64 {
        z.inner(&self.coefficients)
    }
}

fn catalog_radius(kind: &DomainKind, n: usize) -> f64 {
    match kind {
        DomainKind::Ball | DomainKind::L1Ball => 1.0,
        DomainKind::LpBall { p } if *p <= 2.0 => 1.0,
        _ => (n as f64).sqrt(),
    }
}

fn frobenius(m: &CMatrix) -> f64 {
    m.rows().iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl DomainSpec {
    fn catalog(n: usize, kind: DomainKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        let bounding_radius = catalog_radius(&kind, n);
        Ok(DomainSpec { n, kind, class: ConvexityClass::Convex, bounding_radius })
    }

    pub fn ball(n: usize) -> Result<Self> {
        Self::catalog(n, DomainKind::Ball)
    }

    pub fn polydisc(n: usize) -> Result<Self> {
        Self::catalog(n, DomainKind::Polydisc)
    }

    /// The complex simplex `{sum |z_j| < 1}`.
    pub fn l1ball(n: usize) -> Result<Self> {
        Self::catalog(n, DomainKind::L1Ball)
    }

    pub fn lp_ball(n: usize, p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("lp_ball needs finite p >= 1, got {p}")));
        }
        Self::catalog(n, DomainKind::LpBall { p })
    }

    /// `M(base) + b`; inherits the class of `base`.
    pub fn affine_image(base: DomainSpec, matrix: CMatrix, offset: CVector) -> Result<Self> {
        if matrix.dim() != base.n {
            return Err(Error::DimensionMismatch { expected: base.n, got: matrix.dim() });
        }
        let bounding_radius = frobenius(&matrix) * base.bounding_radius + offset.norm();
        let map = AffineMap::new(matrix, offset)?;
        Ok(DomainSpec { n: base.n, class: base.class, bounding_radius, kind: DomainKind::AffineImage { base: Box::new(base), map } })
    }

    /// Image of `base` under a projective map whose denominator does not
    /// vanish on the closure of `base`. The result is declared C-convex.
    pub fn projective_image(base: DomainSpec, map: ProjectiveMap) -> Result<Self> {
        if map.matrix.dim() != base.n {
            return Err(Error::DimensionMismatch { expected: base.n, got: map.matrix.dim() });
        }
        let floor = map.denom_const.norm() - map.denom_linear.norm() * base.bounding_radius;
        if floor <= 0.0 {
            return Err(Error::Domain("projective denominator may vanish on the base domain".into()));
        }
        let bounding_radius = (frobenius(&map.matrix) * base.bounding_radius + map.offset.norm()) / floor;
        let class = if map.is_affine() { base.class } else { ConvexityClass::CConvex };
        Ok(DomainSpec { n: base.n, class, bounding_radius, kind: DomainKind::ProjectiveImage { base: Box::new(base), map } })
    }

    /// `{rho < 0} ∩ {|z| < bounding_radius}` with a user-declared class.
    pub fn defining_function(n: usize, rho: &str, class: ConvexityClass, bounding_radius: f64) -> Result<Self> {
        let expr = Expr::parse(rho, n)?;
        if !(bounding_radius > 0.0 && bounding_radius.is_finite()) {
            return Err(Error::Domain("bounding_radius must be positive".into()));
        }
        Ok(DomainSpec {
            n,
            kind: DomainKind::DefiningFunction { rho: expr, source: rho.to_string() },
            class,
            bounding_radius,
        })
    }

    /// Translates `point` to the origin.
    pub fn recentered(&self, point: &CVector) -> Result<Self> {
        if !self.contains(point)? {
            return Err(Error::NotInterior);
        }
        if point.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Ok(self.clone());
        }
        Self::affine_image(self.clone(), CMatrix::identity(self.n), -point)
    }

    /// `s * D` for `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Domain("scale must be positive".into()));
        }
        let m = CMatrix::from_rows(
            (0..self.n)
                .map(|i| (0..self.n).map(|j| Complex64::new(if i == j { s } else { 0.0 }, 0.0)).collect())
                .collect(),
        )?;
        Self::affine_image(self.clone(), m, CVector::zeros(self.n))
    }

    /// Overrides the declared class after checking it against the kind.
    pub fn with_class(mut self, class: ConvexityClass) -> Result<Self> {
        if class == ConvexityClass::Convex && !self.admits_convex() {
            return Err(Error::ClassMismatch(format!("a {} of this type is not convex", self.kind.name())));
        }
        self.class = class;
        Ok(self)
    }

    pub fn with_bounding_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain("bounding_radius must be positive".into()));
        }
        self.bounding_radius = r;
        Ok(self)
    }

    fn admits_convex(&self) -> bool {
        match &self.kind {
            DomainKind::Ball | DomainKind::Polydisc | DomainKind::L1Ball | DomainKind::LpBall { .. } => true,
            DomainKind::AffineImage { base, .. } => base.admits_convex(),
            DomainKind::ProjectiveImage { base, map } => map.is_affine() && base.admits_convex(),
            DomainKind::DefiningFunction { .. } => true,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn class(&self) -> ConvexityClass {
        self.class
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    pub fn exit_strategy(&self) -> ExitStrategy {
        match self.class {
            ConvexityClass::Convex => ExitStrategy::Doubling,
            ConvexityClass::CConvex => ExitStrategy::march_for(self.bounding_radius),
        }
    }

    pub fn contains(&self, z: &CVector) -> Result<bool> {
        if z.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.dim() });
        }
        Ok(self.contains_unchecked(z))
    }

    pub(crate) fn contains_unchecked(&self, z: &CVector) -> bool {
        if !z.is_finite() {
            return false;
        }
        match &self.kind {
            DomainKind::Ball => z.norm_sqr() < 1.0,
            DomainKind::Polydisc => z.iter().all(|c| c.norm_sqr() < 1.0),
            DomainKind::L1Ball => z.norm_l1() < 1.0,
            DomainKind::LpBall { p } => z.iter().map(|c| c.norm().powf(*p)).sum::<f64>() < 1.0,
            DomainKind::AffineImage { base, map } => base.contains_unchecked(&map.invert(z)),
            DomainKind::ProjectiveImage { base, map } => {
                map.invert(z).is_some_and(|u| base.contains_unchecked(&u))
            }
            DomainKind::DefiningFunction { rho, .. } => {
                z.norm() < self.bounding_radius && rho.eval_real(z.as_slice()) < 0.0
            }
        }
    }

    /// Distance from `base` to the first point of `base + t dir` outside `D`.
    pub fn ray_exit(&self, base: &CVector, dir: &CVector) -> Result<f64> {
        if dir.dim() != self.n || base.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: dir.dim().min(base.dim()) });
        }
        if !self.contains_unchecked(base) {
            return Err(Error::NotInterior);
        }
        let unit = dir.normalized().ok_or_else(|| Error::Domain("zero direction".into()))?;
        first_exit(|z| self.contains_unchecked(z), base, &unit, self.bounding_radius, self.exit_strategy())
    }

    /// Conjugated complex gradient `conj(d rho / d z)` of a defining function
    /// at `a`, unnormalized. Errors at nonsmooth points.
    pub fn conj_gradient(&self, a: &CVector) -> Result<CVector> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: a.dim() });
        }
        let zero = Complex64::new(0.0, 0.0);
        let g = match &self.kind {
            DomainKind::Ball => a.clone(),
            DomainKind::Polydisc => {
                let top = a.norm_sup();
                let active: Vec<usize> = (0..self.n).filter(|&k| a[k].norm() >= top - 1e-9).collect();
                if active.len() != 1 {
                    return Err(Error::NonsmoothPoint(format!("{} polydisc coordinates on the circle", active.len())));
                }
                let k = active[0];
                let mut g = CVector::zeros(self.n);
                g[k] = a[k] / a[k].norm();
                g
            }
            DomainKind::L1Ball => l1_gradient(a)?,
            DomainKind::LpBall { p } if *p == 1.0 => l1_gradient(a)?,
            DomainKind::LpBall { p } => a.map(|c| {
                let r = c.norm();
                if r == 0.0 {
                    zero
                } else {
                    c * r.powf(p - 2.0)
                }
            }),
            DomainKind::AffineImage { base, map } => {
                let g = base.conj_gradient(&map.invert(a))?;
                map.inverse_matrix().conj_transpose().apply(&g)
            }
            DomainKind::ProjectiveImage { base, map } => {
                let z = map.invert(a).ok_or_else(|| Error::Domain("point outside the projective chart".into()))?;
                let g = base.conj_gradient(&z)?;
                map.jacobian(&z).conj_transpose().solve(&g)?
            }
            DomainKind::DefiningFunction { rho, .. } => fd_gradient(rho, a)?,
        };
        if g.norm() < 1e-14 || !g.is_finite() {
            return Err(Error::NonsmoothPoint("vanishing gradient".into()));
        }
        Ok(g)
    }

    /// Tangent functional at a boundary point, validated by sampling.
    pub fn tangent_functional(&self, a: &CVector, flavor: FunctionalFlavor, seed: u64) -> Result<TangentFunctional> {
        let g = self.conj_gradient(a)?;
        let scale = a.norm().max(1.0);
        let normal = g.normalized().expect("nonzero gradient");
        let step = BOUNDARY_TOL * scale;
        if !self.contains_unchecked(&(a - &normal.scale(step))) || self.contains_unchecked(&(a + &normal.scale(step))) {
            return Err(Error::Domain("point is not within tolerance of the boundary".into()));
        }
        let pairing = a.inner(&g);
        let coefficients = match flavor {
            FunctionalFlavor::ComplexAvoiding => {
                if pairing.norm() < 1e-12 * g.norm() * scale {
                    return Err(Error::Domain("tangent hyperplane passes through the origin".into()));
                }
                g.scale_c(1.0 / pairing.conj())
            }
            FunctionalFlavor::RealSupporting => {
                if pairing.re <= 1e-12 * g.norm() * scale {
                    return Err(Error::Domain("origin is not on the inner side of the tangent hyperplane".into()));
                }
                g.scale(1.0 / pairing.re)
            }
        };
        let mut f = TangentFunctional { base_point: a.clone(), coefficients, flavor, validation_margin: f64::INFINITY };
        f.validation_margin = self.validate_functional(&f, seed)?;
        Ok(f)
    }

    fn validate_functional(&self, f: &TangentFunctional, seed: u64) -> Result<f64> {
        let mut rng = sampling::stream(seed, Purpose::Functional, 0);
        let lam = &f.coefficients;
        let lam_sq = lam.norm_sqr();
        let outward = lam.normalized().expect("nonzero");
        let scale = f.base_point.norm().max(1.0);
        let mut violations = 0;
        let mut margin = f64::INFINITY;
        for _ in 0..FUNCTIONAL_SAMPLES {
            let z = self.sample_interior(&mut rng)?;
            let v = f.value(&z);
            let slack = match f.flavor {
                FunctionalFlavor::RealSupporting => 1.0 - v.re,
                FunctionalFlavor::ComplexAvoiding => (v - 1.0).norm(),
            };
            margin = margin.min(slack);
            if slack < -BOUNDARY_TOL || (f.flavor == FunctionalFlavor::ComplexAvoiding && slack == 0.0) {
                violations += 1;
            }
            // a point of the hyperplane through the base point, nudged outward
            let w = sampling::unit_sphere(&mut rng, self.n).scale(rng_radius(&mut rng) * scale);
            let w = match f.flavor {
                FunctionalFlavor::RealSupporting => &w - &lam.scale(w.inner(lam).re / lam_sq),
                FunctionalFlavor::ComplexAvoiding => &w - &lam.scale_c(w.inner(lam) / lam_sq),
            };
            let p = &(&f.base_point + &w) + &outward.scale(BOUNDARY_TOL * scale);
            if self.contains_unchecked(&p) {
                violations += 1;
            }
        }
        if violations > 0 {
            return Err(Error::ValidationFailure { violations });
        }
        Ok(margin)
    }

    /// Interior point drawn along a random ray from the origin.
    pub fn sample_interior<R: rand::Rng>(&self, rng: &mut R) -> Result<CVector> {
        let dir = sampling::unit_sphere(rng, self.n);
        let t = self.ray_exit(&CVector::zeros(self.n), &dir)?;
        let u: f64 = rng.random::<f64>().powf(1.0 / (2 * self.n) as f64);
        Ok(dir.scale(t * u * (1.0 - 1e-9)))
    }

    /// Boundary point (first exit) along a random ray from the origin.
    pub fn sample_boundary<R: rand::Rng>(&self, rng: &mut R) -> Result<CVector> {
        let dir = sampling::unit_sphere(rng, self.n);
        let t = self.ray_exit(&CVector::zeros(self.n), &dir)?;
        Ok(dir.scale(t))
    }
}

fn rng_radius<R: rand::Rng>(rng: &mut R) -> f64 {
    // log-uniform in [1e-4, 2]: probes both the contact neighbourhood and far out
    (1e-4f64.ln() + rng.random::<f64>() * (2.0f64.ln() - 1e-4f64.ln())).exp()
}

fn l1_gradient(a: &CVector) -> Result<CVector> {
    if a.iter().any(|c| c.norm() < 1e-9) {
        return Err(Error::NonsmoothPoint("l1 boundary point with a vanishing coordinate".into()));
    }
    Ok(a.map(|c| c / c.norm()))
}

fn fd_gradient(rho: &Expr, a: &CVector) -> Result<CVector> {
    let h = 1e-6 * a.norm().max(1.0);
    let f0 = rho.eval_real(a.as_slice());
    let mut g = CVector::zeros(a.dim());
    let mut scale = 0.0f64;
    let mut kinks = 0.0f64;
    for k in 0..a.dim() {
        let mut parts = [0.0; 2];
        for (slot, dz) in [Complex64::new(h, 0.0), Complex64::new(0.0, h)].into_iter().enumerate() {
            let mut p = a.clone();
            p[k] += dz;
            let fp = rho.eval_real(p.as_slice());
            p[k] -= dz * 2.0;
            let fm = rho.eval_real(p.as_slice());
            let fwd = (fp - f0) / h;
            let bwd = (f0 - fm) / h;
            parts[slot] = (fp - fm) / (2.0 * h);
            scale = scale.max(parts[slot].abs());
            kinks = kinks.max((fwd - bwd).abs());
        }
        // conj(d/dz) = (d/dx + i d/dy) / 2
        g[k] = Complex64::new(parts[0], parts[1]) * 0.5;
    }
    if !g.is_finite() {
        return Err(Error::NonsmoothPoint("non-finite derivative".into()));
    }
    if kinks > 1e-3 * scale.max(1e-8) + 1e-4 {
        return Err(Error::NonsmoothPoint("one-sided derivatives disagree".into()));
    }
    Ok(g)
}
