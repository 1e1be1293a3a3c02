//! Named catalog domains used by the suites, the probe and the CLI.

use num_complex::Complex64;

use crate::domains::{DomainSpec, ProjectiveMap};
use crate::error::Result;
use crate::numerics::{CMatrix, CVector};

/// Image of the bidisc under `z -> (z1 / (2 - z1), z2 / (2 - z1))`.
///
/// Membership reduces to `|3 w1 - 1| < 2` and `2 |w2| < |1 + w1|`. The set is
/// C-convex but not convex: `(±0.458i, 0.54)` are inside, their midpoint
/// `(0, 0.54)` is not.
pub fn projective_bidisc() -> Result<DomainSpec> {
    projective_polydisc(2, 2.0)
}

/// Image of `D^n` under `z -> z / (pole - z1)`; C-convex for `pole > 1`.
pub fn projective_polydisc(n: usize, pole: f64) -> Result<DomainSpec> {
    if !(pole > 1.0 && pole.is_finite()) {
        return Err(crate::Error::Domain(format!("pole must exceed 1, got {pole}")));
    }
    let c = |re: f64| Complex64::new(re, 0.0);
    let denom: CVector = (0..n).map(|k| c(if k == 0 { -1.0 } else { 0.0 })).collect();
    let map = ProjectiveMap::new(CMatrix::identity(n), CVector::zeros(n), c(pole), denom)?;
    DomainSpec::projective_image(DomainSpec::polydisc(n)?, map)
}

/// Polydisc under the unit lower-triangular shear with subdiagonal entries `shear`.
pub fn sheared_polydisc(n: usize, shear: Complex64) -> Result<DomainSpec> {
    DomainSpec::affine_image(DomainSpec::polydisc(n)?, CMatrix::unit_lower(n, |_, _| shear), CVector::zeros(n))
}

/// The fixture list the strictness suite runs over.
pub fn catalog() -> Result<Vec<(String, DomainSpec)>> {
    Ok(vec![
        ("polydisc2".into(), DomainSpec::polydisc(2)?),
        ("ball2".into(), DomainSpec::ball(2)?),
        ("l1ball2".into(), DomainSpec::l1ball(2)?),
        ("ball3".into(), DomainSpec::ball(3)?),
        ("lp3_ball2".into(), DomainSpec::lp_ball(2, 3.0)?),
        ("sheared_polydisc2".into(), sheared_polydisc(2, Complex64::new(0.5, 0.0))?),
        ("projective_bidisc".into(), projective_bidisc()?),
    ])
}
