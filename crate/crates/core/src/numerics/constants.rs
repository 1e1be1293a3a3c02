//! Closed-form constants of the two universal lower bounds.
//!
//! With `c_n = sqrt((4^n - 1) / 3)`:
//!
//! | class      | ball target                           | polydisc target                         |
//! |------------|---------------------------------------|-----------------------------------------|
//! | convex     | `1 / (sqrt(n) (2 c_n + 1))`           | `1 / (2^(n+1) - 1)`                     |
//! | C-convex   | `1 / (sqrt(n) (sqrt(c_n) + sqrt(c_n + 1))^2)` | `1 / (sqrt(2^n) + sqrt(2^n - 1))^2` |
//! | C-convex, weak form | `1 / (sqrt(n) (4 c_n + 2))`  | `1 / (2^(n+2) - 2)`                     |

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest dimension for which the constants are evaluated.
pub const MAX_DIMENSION: u32 = 512;

/// `c_n = sqrt((4^n - 1) / 3)`.
///
/// Evaluated as `2^n * sqrt((1 - 4^-n) / 3)` so that nothing overflows up to
/// [`MAX_DIMENSION`].
pub fn c_const(n: u32) -> Result<f64> {
    if n == 0 || n > MAX_DIMENSION {
        return Err(Error::Domain(format!("c_n requires 1 <= n <= {MAX_DIMENSION}, got {n}")));
    }
    if n <= 26 {
        // 4^n - 1 is exact in f64 here
        let q = (4f64.powi(n as i32) - 1.0) / 3.0;
        return Ok(q.sqrt());
    }
    Ok(2f64.powi(n as i32) * ((1.0 - 4f64.powi(-(n as i32))) / 3.0).sqrt())
}

/// Radius of the ball kept inside the coordinatewise Cayley image: `c / (2 + c)`.
pub fn tau(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("tau requires 0 < c < 1, got {c}")));
    }
    Ok(tau_formula(c))
}

pub(crate) fn tau_formula(c: f64) -> f64 {
    c / (2.0 + c)
}

/// Radius of the ball kept inside a product of Riemann maps: `c / (1 + sqrt(1 + c))^2`.
pub fn rho(c: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Domain(format!("rho requires 0 < c <= 1, got {c}")));
    }
    let d = 1.0 + (1.0 + c).sqrt();
    Ok(c / (d * d))
}

/// The six universal bounds for dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniversalConstants {
    pub n: u32,
    pub c_n: f64,
    pub bound_convex_ball: f64,
    pub bound_convex_polydisc: f64,
    pub bound_cconvex_ball: f64,
    pub bound_cconvex_polydisc: f64,
    pub weak_cconvex_ball: f64,
    pub weak_cconvex_polydisc: f64,
}

pub fn universal_bounds(n: u32) -> Result<UniversalConstants> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "universal bounds are stated for n >= 2 (uninformative at n = 1), got {n}"
        )));
    }
    let c = c_const(n)?;
    let sqrt_n = (n as f64).sqrt();
    let two_n = 2f64.powi(n as i32);
    let s = c.sqrt() + (c + 1.0).sqrt();
    let t = two_n.sqrt() + (two_n - 1.0).sqrt();
    Ok(UniversalConstants {
        n,
        c_n: c,
        bound_convex_ball: 1.0 / (sqrt_n * (2.0 * c + 1.0)),
        bound_convex_polydisc: 1.0 / (2.0 * two_n - 1.0),
        bound_cconvex_ball: 1.0 / (sqrt_n * s * s),
        bound_cconvex_polydisc: 1.0 / (t * t),
        weak_cconvex_ball: 1.0 / (sqrt_n * (4.0 * c + 2.0)),
        weak_cconvex_polydisc: 1.0 / (4.0 * two_n - 2.0),
    })
}

impl UniversalConstants {
    /// `(ball, polydisc)` bounds of the given class.
    pub fn for_class(&self, class: crate::domains::ConvexityClass) -> (f64, f64) {
        match class {
            crate::domains::ConvexityClass::Convex => (self.bound_convex_ball, self.bound_convex_polydisc),
            crate::domains::ConvexityClass::CConvex => (self.bound_cconvex_ball, self.bound_cconvex_polydisc),
        }
    }
}

pub const CSV_HEADER: &str =
    "n,c_n,convex_ball,convex_polydisc,cconvex_ball,cconvex_polydisc,weak_ball,weak_polydisc";

/// Formats a real with 17 significant digits (exact round-trip for `f64`).
/// Positional between `1e-6` and `1e16`, exponent form outside.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-6..16).contains(&exponent) {
        format!("{x:.*}", (16 - exponent) as usize)
    } else {
        format!("{x:.16e}")
    }
}

/// CSV table of the constants for `n = 2..=n_max`, header included.
pub fn constants_csv(n_max: u32) -> Result<String> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for n in 2..=n_max {
        let u = universal_bounds(n)?;
        let cols = [
            u.c_n,
            u.bound_convex_ball,
            u.bound_convex_polydisc,
            u.bound_cconvex_ball,
            u.bound_cconvex_polydisc,
            u.weak_cconvex_ball,
            u.weak_cconvex_polydisc,
        ];
        out.push_str(&n.to_string());
        for x in cols {
            out.push(',');
            out.push_str(&fmt17(x));
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn c_const_examples() {
        assert_eq!(c_const(1).unwrap(), 1.0);
        assert!(close(c_const(2).unwrap(), 5f64.sqrt(), 1e-15));
        assert!(close(c_const(3).unwrap(), 21f64.sqrt(), 1e-14));
        assert!(c_const(0).is_err());
        assert!(c_const(513).is_err());
        assert!(c_const(512).unwrap().is_finite());
    }

    #[test]
    fn c_const_branches_agree() {
        // both evaluation routes at the switch-over point
        let n = 26;
        let big = 2f64.powi(n) * ((1.0 - 4f64.powi(-n)) / 3.0).sqrt();
        assert!((c_const(n as u32).unwrap() / big - 1.0).abs() < 1e-15);
        assert!(c_const(27).unwrap() > c_const(26).unwrap());
    }

    #[test]
    fn tau_examples() {
        assert!(close(tau(1.0 / 3.0).unwrap(), 1.0 / 7.0, 1e-16));
        assert!(tau(1e-12).unwrap() < 1e-12);
        let t = tau(1.0 / 5f64.sqrt()).unwrap();
        assert!(close(t, 0.1827440, 1e-7));
        assert!(close(t / 2f64.sqrt(), 0.12921952, 1e-8));
        assert!(tau(1.0).is_err() && tau(0.0).is_err() && tau(f64::NAN).is_err());
    }

    #[test]
    fn rho_examples() {
        assert!(close(rho(1.0).unwrap(), 3.0 - 2.0 * 2f64.sqrt(), 1e-15));
        let r = rho(1.0 / 3.0).unwrap();
        assert!(close(r, 1.0 / (2.0 + 3f64.sqrt()).powi(2), 1e-15));
        assert!(close(r, 0.0717968, 1e-7));
        assert!(rho(1e-12).unwrap() < 1e-12);
        assert!(rho(1.5).is_err() && rho(0.0).is_err());
    }

    #[test]
    fn universal_bounds_n2() {
        let u = universal_bounds(2).unwrap();
        assert!(close(u.bound_convex_ball, 0.12921952, 1e-8));
        assert!(close(u.bound_convex_polydisc, 1.0 / 7.0, 1e-16));
        assert!(close(u.bound_cconvex_ball, 0.06515838, 1e-8));
        assert!(close(u.bound_cconvex_polydisc, 0.0717968, 1e-7));
        assert!(close(u.weak_cconvex_polydisc, 1.0 / 14.0, 1e-16));
        assert!(universal_bounds(1).is_err());
    }

    #[test]
    fn universal_bounds_n3() {
        let u = universal_bounds(3).unwrap();
        assert!(close(u.bound_convex_polydisc, 1.0 / 15.0, 1e-16));
        assert!(close(u.bound_cconvex_polydisc, 0.0333705, 1e-7));
        assert!(close(u.weak_cconvex_polydisc, 1.0 / 30.0, 1e-16));
    }

    #[test]
    fn cross_identities_and_orderings() {
        for n in 2..=16u32 {
            let u = universal_bounds(n).unwrap();
            let sq = (n as f64).sqrt();
            let c = u.c_n;
            let two_n = 2f64.powi(n as i32);
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            assert!(rel(u.bound_convex_ball, tau(1.0 / c).unwrap() / sq) < 1e-12);
            assert!(rel(u.bound_cconvex_ball, rho(1.0 / c).unwrap() / sq) < 1e-12);
            assert!(rel(u.bound_convex_polydisc, tau(1.0 / (two_n - 1.0)).unwrap()) < 1e-12);
            assert!(rel(u.bound_cconvex_polydisc, rho(1.0 / (two_n - 1.0)).unwrap()) < 1e-12);
            assert!(u.bound_convex_ball > u.bound_cconvex_ball);
            assert!(u.bound_convex_polydisc > u.bound_cconvex_polydisc);
            assert!(u.bound_cconvex_ball > u.weak_cconvex_ball);
            assert!(u.bound_cconvex_polydisc > u.weak_cconvex_polydisc);
        }
    }

    #[test]
    fn bounds_strictly_decrease_in_n() {
        let mut prev = universal_bounds(2).unwrap();
        for n in 3..=64 {
            let u = universal_bounds(n).unwrap();
            assert!(u.bound_convex_ball < prev.bound_convex_ball);
            assert!(u.bound_convex_polydisc < prev.bound_convex_polydisc);
            assert!(u.bound_cconvex_ball < prev.bound_cconvex_ball);
            assert!(u.bound_cconvex_polydisc < prev.bound_cconvex_polydisc);
            assert!(u.weak_cconvex_ball < prev.weak_cconvex_ball);
            assert!(u.weak_cconvex_polydisc < prev.weak_cconvex_polydisc);
            prev = u;
        }
    }

    #[test]
    fn csv_layout() {
        let csv = constants_csv(3).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let cols: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(cols[0], 2.0);
        assert_eq!(cols[3], 1.0 / 7.0);
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt17(1.0 / 7.0), "0.14285714285714285");
        assert_eq!(fmt17(5f64.sqrt()), "2.2360679774997898");
        for x in [1e-9, 3.0e-7, 0.999_999_999_999_999_9, 12345.678, 1e20, -0.5] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x, "{x}");
        }
    }
}
