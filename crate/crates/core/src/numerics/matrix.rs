use std::fmt;

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::CVector;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix, row-major.
///
/// The two structural flags are kept exact: a matrix flagged `unit_diagonal`
/// stores exactly `1` on its diagonal, and one flagged `lower_triangular`
/// stores exactly `0` above it. Constructors enforce this, and no public
/// method can break it.
#[derive(Clone)]
pub struct CMatrix {
    n: usize,
    entries: Vec<Complex64>,
    lower_triangular: bool,
    unit_diagonal: bool,
}

impl CMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = ONE;
        }
        CMatrix { n, entries, lower_triangular: true, unit_diagonal: true }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape(format!("row of length {} in {n}x{n} matrix", row.len())));
            }
            entries.extend(row);
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("non-finite matrix entry".into()));
        }
        Ok(CMatrix { n, entries, lower_triangular: false, unit_diagonal: false })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    /// Matrix whose `k`-th column is `columns[k]`.
    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.dim() != n) {
            return Err(Error::Shape("columns must all have length n".into()));
        }
        let rows = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        Self::from_rows(rows)
    }

    /// Unit lower-triangular matrix with strictly-lower entries `alpha(j, k)`, `k < j`.
    pub fn unit_lower(n: usize, mut alpha: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::identity(n);
        for j in 1..n {
            for k in 0..j {
                m.entries[j * n + k] = alpha(j, k);
            }
        }
        m
    }

    /// Re-flags a general matrix, checking the structure exactly.
    pub fn into_unit_lower(mut self) -> Result<Self> {
        let n = self.n;
        for j in 0..n {
            if self.entries[j * n + j] != ONE {
                return Err(Error::Shape(format!("diagonal entry {j} is not exactly 1")));
            }
            for k in j + 1..n {
                if self.entries[j * n + k] != ZERO {
                    return Err(Error::Shape(format!("entry ({j},{k}) above the diagonal is nonzero")));
                }
            }
        }
        self.lower_triangular = true;
        self.unit_diagonal = true;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.lower_triangular
    }

    pub fn is_unit_diagonal(&self) -> bool {
        self.unit_diagonal
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> CVector {
        CVector::new(self.entries[i * self.n..(i + 1) * self.n].to_vec())
    }

    pub fn column(&self, j: usize) -> CVector {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        debug_assert_eq!(v.dim(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.entries[i * self.n..(i + 1) * self.n];
                row.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        let lower = self.lower_triangular && other.lower_triangular;
        let unit = lower && self.unit_diagonal && other.unit_diagonal;
        let mut m = CMatrix { n, entries, lower_triangular: false, unit_diagonal: false };
        if lower {
            // exact products of exact structure stay exact
            for i in 0..n {
                if unit {
                    m.entries[i * n + i] = ONE;
                }
                for j in i + 1..n {
                    m.entries[i * n + j] = ZERO;
                }
            }
            m.lower_triangular = true;
            m.unit_diagonal = unit;
        }
        m
    }

    pub fn conj_transpose(&self) -> CMatrix {
        let n = self.n;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        CMatrix { n, entries, lower_triangular: false, unit_diagonal: false }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Solves `self * x = b` by Gaussian elimination with partial pivoting.
    ///
    /// Used for membership tests of affine and projective images, where the
    /// map is given in forward form.
    pub fn solve(&self, b: &CVector) -> Result<CVector> {
        let n = self.n;
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
        }
        let mut a = self.entries.clone();
        let mut x: Vec<Complex64> = b.as_slice().to_vec();
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
                .unwrap();
            if a[pivot * n + col].norm() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                x.swap(pivot, col);
            }
            let p = a[col * n + col];
            for i in col + 1..n {
                let f = a[i * n + col] / p;
                if f == ZERO {
                    continue;
                }
                for j in col..n {
                    let t = a[col * n + j];
                    a[i * n + j] -= f * t;
                }
                let t = x[col];
                x[i] -= f * t;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= a[i * n + j] * x[j];
            }
            x[i] = s / a[i * n + i];
        }
        Ok(CVector::new(x))
    }
}

// structure flags follow from the entries, so equality ignores them
impl PartialEq for CMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CMatrix")
            .field("rows", &self.rows())
            .field("lower_triangular", &self.lower_triangular)
            .field("unit_diagonal", &self.unit_diagonal)
            .finish()
    }
}

/// Serializes as nested rows of `[re, im]` pairs.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for row in self.entries.chunks(self.n) {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}
