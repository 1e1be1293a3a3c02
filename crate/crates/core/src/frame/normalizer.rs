use serde::Serialize;

use super::search::FrankelFrame;
use crate::domains::{ConvexityClass, DomainSpec, FunctionalFlavor, TangentFunctional};
use crate::error::{Error, Result};
use crate::numerics::{orthonormal_complement, CMatrix, CVector, Complex64};
use crate::sampling::{self, Purpose};

/// Coefficients beyond the diagonal of a transported functional must vanish to this.
pub const TRIANGULARITY_TOL: f64 = 1e-8;
pub const ALPHA_TOL: f64 = 1e-9;

/// `T` sends the contacts to the standard basis; `A` (unit lower triangular)
/// then sends the hyperplane at `a_j` to `{Z_j = 1}` (or `{Re Z_j = 1}`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Normalizer {
    pub class: ConvexityClass,
    pub t: CMatrix,
    pub t_inverse: CMatrix,
    pub a: CMatrix,
    pub composite: CMatrix,
    pub functionals: Vec<TangentFunctional>,
    /// Largest modulus of the discarded coefficients `k > j`, per row.
    pub triangularity_margins: Vec<f64>,
}

pub fn build_normalizer(d: &DomainSpec, frame: &FrankelFrame, seed: u64) -> Result<Normalizer> {
    let n = frame.dim();
    if n != d.dim() {
        return Err(Error::DimensionMismatch { expected: d.dim(), got: n });
    }
    let rows = frame
        .contacts
        .iter()
        .zip(&frame.radii)
        .map(|(a, r)| a.iter().map(|c| c.conj() / (r * r)).collect())
        .collect();
    let t = CMatrix::from_rows(rows)?;
    let t_inverse = CMatrix::from_columns(&frame.contacts)?;
    let flavor = FunctionalFlavor::for_class(d.class());

    let mut functionals = Vec::with_capacity(n);
    let mut alpha = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut triangularity_margins = Vec::with_capacity(n);
    for (j, a_j) in frame.contacts.iter().enumerate() {
        let f = d.tangent_functional(a_j, flavor, seed.wrapping_add(j as u64))?;
        // the functional in T-coordinates: Z -> sum_k Z_k <a_k, lambda>
        let beta: Vec<Complex64> = frame.contacts.iter().map(|a_k| a_k.inner(&f.coefficients)).collect();
        let mut worst = 0.0f64;
        for (k, b) in beta.iter().enumerate().skip(j + 1) {
            worst = worst.max(b.norm());
            if b.norm() > TRIANGULARITY_TOL {
                return Err(Error::TriangularityViolation { row: j, col: k, modulus: b.norm() });
            }
        }
        triangularity_margins.push(worst);
        let diag = beta[j];
        if diag.norm() < 1e-12 {
            return Err(Error::TriangularityViolation { row: j, col: j, modulus: 0.0 });
        }
        if flavor == FunctionalFlavor::RealSupporting && (diag.im.abs() > TRIANGULARITY_TOL || diag.re <= 0.0) {
            return Err(Error::TriangularityViolation { row: j, col: j, modulus: diag.im.abs() });
        }
        for k in 0..j {
            let value = beta[k] / diag;
            if value.norm() > 1.0 + ALPHA_TOL {
                return Err(Error::AlphaBoundViolation { row: j, col: k, modulus: value.norm() });
            }
            alpha[j][k] = value;
        }
        functionals.push(f);
    }
    let a = CMatrix::unit_lower(n, |j, k| alpha[j][k]);
    let composite = a.mul(&t);
    Ok(Normalizer { class: d.class(), t, t_inverse, a, composite, functionals, triangularity_margins })
}

/// Sampled margins of the normalizer's defining properties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizerChecks {
    /// `max_j |T a_j - e_j|`.
    pub contact_images: f64,
    /// Largest deviation of the `j`-th coordinate of `A T z` from 1 (or of its
    /// real part, convex class) over points `z` on the hyperplane at `a_j`.
    pub hyperplane_images: f64,
    /// Points of the shrunken unit l1 ball whose `T`-preimage left `D`.
    pub l1_violations: usize,
    /// Points of the discs `D e_j` whose `T`-preimage left `D`.
    pub disc_violations: usize,
    /// Largest `|alpha_{j,k}|`.
    pub alpha_max: f64,
    /// Per row `j >= 1`: `1 - min_k |alpha_{j,k}|`; positive when not every
    /// entry of the row has modulus one.
    pub row_gaps: Vec<f64>,
    pub samples: usize,
}

impl NormalizerChecks {
    /// No row below the first has all its entries on the unit circle.
    pub fn no_extremal_row(&self) -> bool {
        self.row_gaps.iter().all(|g| *g > ALPHA_TOL)
    }

    pub fn passed(&self) -> bool {
        self.contact_images <= 1e-9
            && self.hyperplane_images <= 1e-8
            && self.l1_violations == 0
            && self.disc_violations == 0
            && self.alpha_max <= 1.0 + ALPHA_TOL
    }
}

impl Normalizer {
    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    pub fn alpha(&self, j: usize, k: usize) -> Complex64 {
        self.a.get(j, k)
    }

    /// Row gaps `1 - min_{k<j} |alpha_{j,k}|` for `j >= 1`.
    pub fn row_gaps(&self) -> Vec<f64> {
        (1..self.dim())
            .map(|j| 1.0 - (0..j).map(|k| self.alpha(j, k).norm()).fold(f64::INFINITY, f64::min))
            .collect()
    }

    pub fn checks(&self, d: &DomainSpec, frame: &FrankelFrame, samples: usize, seed: u64) -> Result<NormalizerChecks> {
        let n = self.dim();
        let mut contact_images = 0.0f64;
        for (j, a) in frame.contacts.iter().enumerate() {
            contact_images = contact_images.max(self.t.apply(a).distance(&CVector::basis(n, j)));
        }

        let mut rng = sampling::stream(seed, Purpose::Containment, 0);
        let mut hyperplane_images = 0.0f64;
        for (j, f) in self.functionals.iter().enumerate() {
            let lam = &f.coefficients;
            let mut kernel = orthonormal_complement(n, std::slice::from_ref(lam))?;
            if f.flavor == FunctionalFlavor::RealSupporting {
                kernel.push(lam.scale_c(Complex64::i()).normalized().expect("nonzero"));
            }
            let scale = frame.radii[j].max(1.0);
            for _ in 0..samples {
                let mut z = f.base_point.clone();
                for b in &kernel {
                    let c = if f.flavor == FunctionalFlavor::RealSupporting && std::ptr::eq(b, kernel.last().unwrap()) {
                        Complex64::new(rand::Rng::random_range(&mut rng, -1.0..1.0), 0.0)
                    } else {
                        sampling::unit_disc(&mut rng)
                    };
                    z = &z + &b.scale_c(c * scale);
                }
                let w = self.composite.apply(&z)[j];
                let dev = match f.flavor {
                    FunctionalFlavor::RealSupporting => (w.re - 1.0).abs(),
                    FunctionalFlavor::ComplexAvoiding => (w - 1.0).norm(),
                };
                hyperplane_images = hyperplane_images.max(dev);
            }
        }

        let mut l1_violations = 0;
        for _ in 0..samples * 10 {
            let u: f64 = rand::Rng::random(&mut rng);
            let w = sampling::simplex_boundary(&mut rng, n).scale(u.powf(1.0 / (2 * n) as f64) * (1.0 - 1e-6));
            if !d.contains_unchecked(&self.t_inverse.apply(&w)) {
                l1_violations += 1;
            }
        }
        let mut disc_violations = 0;
        for _ in 0..samples {
            for j in 0..n {
                let w = CVector::basis(n, j).scale_c(sampling::unit_disc(&mut rng) * (1.0 - 1e-6));
                if !d.contains_unchecked(&self.t_inverse.apply(&w)) {
                    disc_violations += 1;
                }
            }
        }

        let alpha_max = (0..n)
            .flat_map(|j| (0..j).map(move |k| (j, k)))
            .map(|(j, k)| self.alpha(j, k).norm())
            .fold(0.0, f64::max);
        Ok(NormalizerChecks {
            contact_images,
            hyperplane_images,
            l1_violations,
            disc_violations,
            alpha_max,
            row_gaps: self.row_gaps(),
            samples,
        })
    }
}
