use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of `C^n`. Serializes as a list of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        CVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        CVector(vec![Complex64::new(0.0, 0.0); n])
    }

    /// The standard basis vector `e_k` (zero-based `k`).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_reals(re: &[f64]) -> Self {
        CVector(re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a vector from `2n` reals laid out as `[re_1, im_1, re_2, im_2, ...]`.
    pub fn from_real_coords(x: &[f64]) -> Self {
        CVector(x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }

    pub fn to_real_coords(&self) -> Vec<f64> {
        self.0.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// Hermitian inner product `<self, other> = sum self_k * conj(other_k)`.
    pub fn inner(&self, other: &CVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).sum()
    }

    pub fn norm_sup(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> CVector {
        CVector(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_c(&self, s: Complex64) -> CVector {
        CVector(self.0.iter().map(|z| z * s).collect())
    }

    /// Returns `self / |self|`, or `None` for (numerically) zero vectors.
    pub fn normalized(&self) -> Option<CVector> {
        let n = self.norm();
        (n > 1e-300 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Coordinatewise moduli as a real-positive vector.
    pub fn moduli(&self) -> CVector {
        CVector(self.0.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> CVector {
        CVector(self.0.iter().map(|&z| f(z)).collect())
    }

    pub fn distance(&self, other: &CVector) -> f64 {
        (self - other).norm()
    }
}

impl From<Vec<Complex64>> for CVector {
    fn from(v: Vec<Complex64>) -> Self {
        CVector(v)
    }
}

impl FromIterator<Complex64> for CVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        CVector(iter.into_iter().collect())
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CVector {
    type Output = CVector;
    fn sub(self, rhs: &CVector) -> CVector {
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CVector {
    type Output = CVector;
    fn neg(self) -> CVector {
        CVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<f64> for &CVector {
    type Output = CVector;
    fn mul(self, s: f64) -> CVector {
        self.scale(s)
    }
}
