//! Inverses of unit lower-triangular matrices and the structure of their
//! coefficients.
//!
//! Writing `w = A^{-1} Z` for unit lower-triangular `A = [alpha_{j,k}]`, the
//! coefficient of `Z_k` in `w_j` is a signed sum of products of the `alpha`s
//! along strictly decreasing index chains `j -> m_1 -> ... -> k`. There are
//! `2^(j-k-1)` such chains, so `|alpha| <= 1` gives `|c_{j,k}| <= 2^(j-k-1)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Exact inverse of a unit lower-triangular matrix via
/// `c_{j,j} = 1`, `c_{j,k} = -sum_{m=k}^{j-1} alpha_{j,m} c_{m,k}`.
pub fn inverse_coefficients(a: &CMatrix) -> Result<CMatrix> {
    if !(a.is_lower_triangular() && a.is_unit_diagonal()) {
        return Err(Error::Shape("inverse_coefficients needs a unit lower-triangular matrix".into()));
    }
    let n = a.dim();
    let mut c = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        c[j * n + j] = Complex64::new(1.0, 0.0);
        for k in (0..j).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in k..j {
                s += a.get(j, m) * c[m * n + k];
            }
            c[j * n + k] = -s;
        }
    }
    Ok(CMatrix::unit_lower(n, |j, k| c[j * n + k]))
}

/// An `alpha_{j,k}` symbol (zero-based indices, `k < j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaSymbol {
    pub row: u8,
    pub col: u8,
}

/// Ordered product of `alpha` symbols; the free algebra does not commute.
pub type Monomial = Vec<AlphaSymbol>;

/// Polynomial over the free algebra on the `alpha` symbols, integer coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FreePolynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl FreePolynomial {
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), 1);
        FreePolynomial { terms }
    }

    /// Number of monomials with nonzero coefficient.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().filter(|&&c| c != 0).count()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    fn add_scaled_left(&mut self, symbol: AlphaSymbol, sign: i64, other: &FreePolynomial) {
        for (mono, &c) in &other.terms {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push(symbol);
            m.extend_from_slice(mono);
            *self.terms.entry(m).or_insert(0) += sign * c;
        }
        self.terms.retain(|_, c| *c != 0);
    }

    /// Evaluates with numeric `alpha` values taken from `a`.
    pub fn evaluate(&self, a: &CMatrix) -> Complex64 {
        self.terms
            .iter()
            .map(|(mono, &c)| {
                mono.iter().fold(Complex64::new(c as f64, 0.0), |acc, s| {
                    acc * a.get(s.row as usize, s.col as usize)
                })
            })
            .sum()
    }
}

/// Largest `n` accepted by [`symbolic_inverse`].
pub const SYMBOLIC_MAX_N: usize = 8;

/// Expands the inverse recursion symbolically; entry `[j][k]` is the
/// coefficient of `Z_k` in `w_j` (lower triangle only, `k <= j`).
pub fn symbolic_inverse(n: usize) -> Result<Vec<Vec<FreePolynomial>>> {
    if n == 0 || n > SYMBOLIC_MAX_N {
        return Err(Error::Domain(format!("symbolic expansion supports 1 <= n <= {SYMBOLIC_MAX_N}")));
    }
    let mut c: Vec<Vec<FreePolynomial>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![FreePolynomial::default(); j + 1];
        row[j] = FreePolynomial::one();
        for k in (0..j).rev() {
            let mut poly = FreePolynomial::default();
            for m in k..j {
                let sym = AlphaSymbol { row: j as u8, col: m as u8 };
                poly.add_scaled_left(sym, -1, &c[m][k]);
            }
            row[k] = poly;
        }
        c.push(row);
    }
    Ok(c)
}
