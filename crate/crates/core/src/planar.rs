//! One-variable maps applied coordinatewise: the Cayley map of the half
//! plane `{Re z < 1}` and a small catalog of Riemann maps onto the disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{rho, tau_formula, CVector};
use crate::sampling::{self, Purpose};

/// `psi(z) = z / (2 - z)`, sending `{Re z < 1}` onto the unit disc.
pub fn cayley_eval(z: Complex64) -> Result<Complex64> {
    if !(z.re < 1.0) {
        return Err(Error::Domain(format!("Cayley map needs Re z < 1, got {z}")));
    }
    Ok(z / (2.0 - z))
}

/// `psi^-1(w) = 2w / (1 + w)`.
pub fn cayley_inverse(w: Complex64) -> Result<Complex64> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!("inverse Cayley map needs |w| < 1, got {w}")));
    }
    Ok(2.0 * w / (1.0 + w))
}

/// The Cayley map on every coordinate.
pub fn cayley_product(z: &CVector) -> Result<CVector> {
    z.iter().map(|&c| cayley_eval(c)).collect()
}

pub fn cayley_product_inverse(w: &CVector) -> Result<CVector> {
    w.iter().map(|&c| cayley_inverse(c)).collect()
}

/// Growth ceiling `4|z| / (1 - |z|)^2` of a normalized univalent map with `|f'(0)| <= 4`.
pub fn koebe_bound(z: Complex64) -> Result<f64> {
    let r = z.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("distortion bound needs |z| < 1, got {z}")));
    }
    Ok(4.0 * r / ((1.0 - r) * (1.0 - r)))
}

/// Result of sampling a ball `r B^n` of some image and pulling it back into `c B^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusCheck {
    pub n: usize,
    pub c: f64,
    /// The claimed radius inside the image.
    pub radius: f64,
    pub samples: usize,
    pub violations: usize,
    /// Smallest `c - |preimage|` seen; near zero at the extremal directions.
    pub min_slack: f64,
}

impl RadiusCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn radius_check(
    n: usize,
    c: f64,
    radius: f64,
    samples: usize,
    seed: u64,
    pull_back: impl Fn(&CVector) -> Option<CVector>,
) -> RadiusCheck {
    let shrunk = radius * (1.0 - 1e-9);
    let mut rng = sampling::stream(seed, Purpose::Projection, n as u64);
    // the negative coordinate axes are where both estimates are tight
    let mut points: Vec<CVector> = (0..n).map(|k| CVector::basis(n, k).scale(-shrunk)).collect();
    points.extend((0..samples).map(|_| sampling::unit_sphere(&mut rng, n).scale(shrunk)));
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for w in &points {
        let slack = match pull_back(w) {
            Some(z) => c - z.norm(),
            None => f64::NEG_INFINITY,
        };
        if !(slack > 0.0) {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
    }
    RadiusCheck { n, c, radius, samples: points.len(), violations, min_slack }
}

/// Samples the sphere of radius `tau(c)` and checks that the inverse Cayley
/// product lands in `c B^n`.
pub fn tau_radius_check(n: usize, c: f64, samples: usize, seed: u64) -> Result<RadiusCheck> {
    if n == 0 || !(c > 0.0 && c <= 1.0) {
        return Err(Error::Domain(format!("need n >= 1 and 0 < c <= 1, got n = {n}, c = {c}")));
    }
    Ok(radius_check(n, c, tau_formula(c), samples, seed, |w| cayley_product_inverse(w).ok()))
}

/// Samples the sphere of radius `rho(c)` and checks that the product of the
/// inverse Riemann maps lands in `c B^n`.
pub fn rho_product_check(maps: &[PlanarRiemannMap], c: f64, samples: usize, seed: u64) -> Result<RadiusCheck> {
    let radius = rho(c)?;
    if maps.is_empty() {
        return Err(Error::Shape("no planar maps".into()));
    }
    Ok(radius_check(maps.len(), c, radius, samples, seed, |w| {
        w.iter().zip(maps).map(|(&z, m)| m.inverse(z).ok()).collect()
    }))
}

/// Simply connected planar domain containing 0 with a closed-form Riemann map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanarShape {
    UnitDisc,
    /// `{Re z < 1}`.
    HalfPlane,
    Disc { center: Complex64, radius: f64 },
    /// The plane minus the ray `[1, inf)`.
    SlitPlane,
    /// `{scale * z + shift : z in base}`.
    Affine { base: Box<PlanarShape>, scale: Complex64, shift: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum BaseShape {
    UnitDisc,
    HalfPlane,
    SlitPlane,
}

impl BaseShape {
    fn contains(self, z: Complex64) -> bool {
        match self {
            BaseShape::UnitDisc => z.norm() < 1.0,
            BaseShape::HalfPlane => z.re < 1.0,
            BaseShape::SlitPlane => !(z.im == 0.0 && z.re >= 1.0),
        }
    }

    fn boundary_distance(self, z: Complex64) -> f64 {
        match self {
            BaseShape::UnitDisc => 1.0 - z.norm(),
            BaseShape::HalfPlane => 1.0 - z.re,
            BaseShape::SlitPlane if z.re >= 1.0 => z.im.abs(),
            BaseShape::SlitPlane => (z - 1.0).norm(),
        }
    }

    fn to_disc(self, z: Complex64) -> Complex64 {
        match self {
            BaseShape::UnitDisc => z,
            BaseShape::HalfPlane => z / (2.0 - z),
            BaseShape::SlitPlane => {
                let s = 1.0 + (1.0 - z).sqrt();
                z / (s * s)
            }
        }
    }

    fn from_disc(self, w: Complex64) -> Complex64 {
        match self {
            BaseShape::UnitDisc => w,
            BaseShape::HalfPlane => 2.0 * w / (1.0 + w),
            BaseShape::SlitPlane => 4.0 * w / ((1.0 + w) * (1.0 + w)),
        }
    }

    fn from_disc_derivative(self, w: Complex64) -> Complex64 {
        match self {
            BaseShape::UnitDisc => Complex64::new(1.0, 0.0),
            BaseShape::HalfPlane => 2.0 / ((1.0 + w) * (1.0 + w)),
            BaseShape::SlitPlane => 4.0 * (1.0 - w) / ((1.0 + w) * (1.0 + w) * (1.0 + w)),
        }
    }
}

/// Riemann map `phi: (Omega, 0) -> (D, 0)` and its inverse `f`, written as
/// `phi(z) = M(phi_0((z - shift) / scale))` for a base map `phi_0` and the
/// disc automorphism `M` that restores `phi(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarRiemannMap {
    pub omega: PlanarShape,
    #[serde(skip)]
    base: BaseShape,
    scale: Complex64,
    shift: Complex64,
    /// `phi_0` of the preimage of 0; the automorphism sends it to 0.
    hub: Complex64,
}

impl PlanarRiemannMap {
    pub fn new(omega: PlanarShape) -> Result<Self> {
        let (base, scale, shift) = flatten(&omega)?;
        if scale.norm() == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::UnsupportedShape("degenerate affine map".into()));
        }
        let origin = -shift / scale;
        if !base.contains(origin) {
            return Err(Error::UnsupportedShape("0 is not inside the shape".into()));
        }
        let hub = base.to_disc(origin);
        Ok(PlanarRiemannMap { omega, base, scale, shift, hub })
    }

    fn to_base(&self, z: Complex64) -> Complex64 {
        (z - self.shift) / self.scale
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.base.contains(self.to_base(z))
    }

    /// `phi(z)`.
    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        if !self.contains(z) {
            return Err(Error::Domain(format!("{z} is outside the shape")));
        }
        let u = self.base.to_disc(self.to_base(z));
        Ok((u - self.hub) / (1.0 - self.hub.conj() * u))
    }

    /// `f(w) = phi^-1(w)` for `|w| < 1`.
    pub fn inverse(&self, w: Complex64) -> Result<Complex64> {
        if !(w.norm() < 1.0) {
            return Err(Error::Domain(format!("{w} is outside the unit disc")));
        }
        let u = (w + self.hub) / (1.0 + self.hub.conj() * w);
        Ok(self.scale * self.base.from_disc(u) + self.shift)
    }

    /// `f'(0)`.
    pub fn inverse_derivative_at_zero(&self) -> Complex64 {
        self.scale * self.base.from_disc_derivative(self.hub) * (1.0 - self.hub.norm_sqr())
    }

    /// Distance from 0 to the boundary of the shape.
    pub fn boundary_distance(&self) -> f64 {
        self.scale.norm() * self.base.boundary_distance(self.to_base(Complex64::new(0.0, 0.0)))
    }

    /// Whether `1` lies on the boundary, within `tol`.
    pub fn has_one_on_boundary(&self, tol: f64) -> bool {
        let u = self.to_base(Complex64::new(1.0, 0.0));
        self.base.boundary_distance(u).abs() * self.scale.norm() <= tol
    }
}

/// Closed-form shapes exercised by the distortion suites; the last three
/// contain 1 and so fall outside the distortion hypotheses.
pub fn catalog_shapes() -> Vec<PlanarShape> {
    let c = Complex64::new;
    vec![
        PlanarShape::UnitDisc,
        PlanarShape::HalfPlane,
        PlanarShape::SlitPlane,
        PlanarShape::Disc { center: c(-1.0, 0.0), radius: 2.0 },
        PlanarShape::Disc { center: c(0.0, 0.2), radius: 0.9 },
        PlanarShape::Affine { base: Box::new(PlanarShape::HalfPlane), scale: Complex64::from_polar(0.5, 0.25 * std::f64::consts::PI), shift: c(0.0, 0.0) },
        PlanarShape::Affine { base: Box::new(PlanarShape::SlitPlane), scale: c(0.5, 0.5), shift: c(0.0, 0.0) },
        PlanarShape::Affine { base: Box::new(PlanarShape::HalfPlane), scale: c(0.0, 1.0), shift: c(0.3, 0.0) },
        PlanarShape::Disc { center: c(0.2, -0.3), radius: 0.9 },
    ]
}

/// Maps whose shape omits 1, the setting of the distortion estimate.
pub fn qualifying_maps() -> Vec<PlanarRiemannMap> {
    catalog_shapes()
        .into_iter()
        .map(|s| PlanarRiemannMap::new(s).expect("catalog shapes contain 0"))
        .filter(|m| !m.contains(Complex64::new(1.0, 0.0)))
        .collect()
}

fn flatten(shape: &PlanarShape) -> Result<(BaseShape, Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(match shape {
        PlanarShape::UnitDisc => (BaseShape::UnitDisc, one, zero),
        PlanarShape::HalfPlane => (BaseShape::HalfPlane, one, zero),
        PlanarShape::SlitPlane => (BaseShape::SlitPlane, one, zero),
        PlanarShape::Disc { center, radius } => {
            if !(*radius > 0.0 && radius.is_finite()) {
                return Err(Error::UnsupportedShape(format!("disc radius {radius}")));
            }
            (BaseShape::UnitDisc, Complex64::new(*radius, 0.0), *center)
        }
        PlanarShape::Affine { base, scale, shift } => {
            let (b, s, t) = flatten(base)?;
            (b, scale * s, scale * t + shift)
        }
    })
}
