//! Complex linear algebra, closed-form constants, and triangular-coefficient
//! analysis.

mod constants;
mod linalg;
mod matrix;
mod triangular;
mod vector;

pub use constants::{
    c_const, constants_csv, fmt17, rho, tau, universal_bounds, UniversalConstants, CSV_HEADER, MAX_DIMENSION,
};
pub(crate) use constants::tau_formula;
pub use linalg::{orthonormal_complement, project};
pub use matrix::CMatrix;
pub use triangular::{inverse_coefficients, symbolic_inverse, AlphaSymbol, FreePolynomial, Monomial, SYMBOLIC_MAX_N};
pub use vector::CVector;

pub use num_complex::Complex64;

/// Absolute tolerance for complex comparisons of O(1) pipeline quantities.
pub const COMPLEX_TOL: f64 = 1e-12;
