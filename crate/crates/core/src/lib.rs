//! Certified universal lower bounds for the squeezing functions of
//! nondegenerate convex and C-convex domains in `C^n`.
//!
//! The pipeline, for a bounded domain `D` containing the origin:
//!
//! 1. [`frame::build_frame`] finds nested nearest boundary points
//!    `a^1, ..., a^n` over shrinking orthogonal subspaces;
//! 2. [`frame::build_normalizer`] turns them into the linear map `T` and the
//!    unit lower-triangular `A` that send the tangent hyperplanes at the
//!    `a^j` to `{Re Z_j = 1}` (convex) or `{Z_j = 1}` (C-convex);
//! 3. [`bounds::certify`] reports the universal constants, re-checks every
//!    containment the argument rests on by sampling, and measures an explicit
//!    witness embedding `Psi o A o T` or `Phi o A o T`.
//!
//! The [`verify`] module holds the standalone property suites.

pub mod bounds;
pub mod domains;
mod error;
pub mod fixtures;
pub mod frame;
pub mod numerics;
pub mod planar;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};

/// Schema tag embedded in every JSON report.
pub const SCHEMA: &str = "squeeze-cert/1";

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/constants.md")]
    pub struct Constants;
    #[doc = include_str!("../../../book/src/domains.md")]
    pub struct Domains;
    #[doc = include_str!("../../../book/src/frame.md")]
    pub struct Frame;
    #[doc = include_str!("../../../book/src/planar-maps.md")]
    pub struct PlanarMaps;
    #[doc = include_str!("../../../book/src/certification.md")]
    pub struct Certification;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
}
