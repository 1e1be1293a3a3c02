use super::CVector;
use crate::error::{Error, Result};

/// Orthonormal basis of `C^n ⊖ span(vectors)` under the standard Hermitian
/// inner product.
///
/// The inputs are orthonormalized first (modified Gram-Schmidt); the
/// complement is then grown from the standard basis, at each step taking the
/// basis vector with the largest residual (lowest index on ties), so the
/// output is deterministic.
pub fn orthonormal_complement(n: usize, vectors: &[CVector]) -> Result<Vec<CVector>> {
    if vectors.len() > n {
        return Err(Error::RankDeficient(format!("{} vectors in C^{n}", vectors.len())));
    }
    let mut span: Vec<CVector> = Vec::with_capacity(n);
    for v in vectors {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        let scale = v.norm();
        let r = residual(v, &span);
        if scale == 0.0 || r.norm() <= 1e-10 * scale {
            return Err(Error::RankDeficient("input vectors are linearly dependent".into()));
        }
        span.push(r.normalized().expect("nonzero residual"));
    }
    let mut complement = Vec::with_capacity(n - span.len());
    while span.len() < n {
        let mut best: Option<CVector> = None;
        for k in 0..n {
            let r = residual(&CVector::basis(n, k), &span);
            if best.as_ref().is_none_or(|b| r.norm() > b.norm() + 1e-15) {
                best = Some(r);
            }
        }
        let r = best.expect("n > 0");
        let u = r.normalized().ok_or_else(|| Error::RankDeficient("complement collapsed".into()))?;
        span.push(u.clone());
        complement.push(u);
    }
    Ok(complement)
}

/// `v` minus its projection on the orthonormal family `basis`, applied twice
/// for stability.
fn residual(v: &CVector, basis: &[CVector]) -> CVector {
    let mut r = v.clone();
    for _ in 0..2 {
        for u in basis {
            let p = r.inner(u);
            r = &r - &u.scale_c(p);
        }
    }
    r
}

/// Orthogonal projection onto the span of an orthonormal family.
pub fn project(v: &CVector, basis: &[CVector]) -> CVector {
    let mut out = CVector::zeros(v.dim());
    for u in basis {
        out = &out + &u.scale_c(v.inner(u));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn complement_of_e1() {
        let c = orthonormal_complement(2, &[CVector::basis(2, 0)]).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].distance(&CVector::basis(2, 1)) < 1e-15);
    }

    #[test]
    fn complement_of_diagonal() {
        let h = 0.5f64.sqrt();
        let c = orthonormal_complement(2, &[CVector::from_reals(&[h, h])]).unwrap();
        let expected = CVector::from_reals(&[h, -h]);
        // unique up to a unit phase
        let phase = c[0].inner(&expected);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(c[0].distance(&expected) < 1e-12);
    }

    #[test]
    fn complement_in_c3() {
        let c = orthonormal_complement(3, &[CVector::basis(3, 0), CVector::basis(3, 1)]).unwrap();
        assert_eq!(c, vec![CVector::basis(3, 2)]);
        let full = orthonormal_complement(3, &[]).unwrap();
        assert_eq!(full.len(), 3);
    }

    #[test]
    fn dependent_inputs_rejected() {
        let v = CVector::new(vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0), Complex64::new(0.0, 0.0)]);
        let w = v.scale_c(Complex64::new(0.0, 3.0));
        assert!(matches!(orthonormal_complement(3, &[v, w]), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn complement_is_orthogonal_to_inputs() {
        let a = CVector::new(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.9), Complex64::new(0.5, 0.0)]);
        let b = CVector::new(vec![Complex64::new(0.0, 1.0), Complex64::new(0.4, 0.0), Complex64::new(-0.1, 0.2)]);
        let c = orthonormal_complement(3, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].inner(&a).norm() < 1e-12 && c[0].inner(&b).norm() < 1e-12);
        assert!((c[0].norm() - 1.0).abs() < 1e-12);
    }
}
