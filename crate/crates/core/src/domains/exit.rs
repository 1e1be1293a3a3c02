use crate::error::{Error, Result};
use crate::numerics::CVector;

/// How the first exit along a ray is bracketed before bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExitStrategy {
    /// Geometric doubling; valid when each ray from the base leaves the set
    /// exactly once (convex sets).
    Doubling,
    /// Forward march with step `max(min_step, t * growth)`; finds the first
    /// exit of sets that a ray may leave and re-enter, up to the step size.
    March { min_step: f64, growth: f64 },
}

impl ExitStrategy {
    pub fn march_for(bounding_radius: f64) -> Self {
        ExitStrategy::March { min_step: bounding_radius.min(1.0) / 256.0, growth: 1.0 / 64.0 }
    }
}

/// First `t > 0` with `base + t dir` outside the set described by `inside`.
///
/// `inside(base)` must hold. The bracket is bisected until it is a few ulps
/// wide, well below `1e-12` absolute for O(1) sets. Fails with
/// [`Error::CapExceeded`] when no exit is found before `cap`.
pub fn first_exit<F>(inside: F, base: &CVector, dir: &CVector, cap: f64, strategy: ExitStrategy) -> Result<f64>
where
    F: Fn(&CVector) -> bool,
{
    let mut point = base.clone();
    let mut at = |t: f64| {
        for k in 0..base.dim() {
            point[k] = base[k] + dir[k] * t;
        }
        inside(&point)
    };
    let limit = 2.0 * cap + 1.0;
    let (mut lo, mut hi) = match strategy {
        ExitStrategy::Doubling => {
            let mut lo = 0.0;
            let mut hi = cap.min(1.0) / 16.0;
            while at(hi) {
                lo = hi;
                hi *= 2.0;
                if hi > limit {
                    return Err(Error::CapExceeded { cap });
                }
            }
            (lo, hi)
        }
        ExitStrategy::March { min_step, growth } => {
            let mut lo = 0.0f64;
            loop {
                let hi = lo + min_step.max(lo * growth);
                if !at(hi) {
                    break (lo, hi);
                }
                lo = hi;
                if lo > limit {
                    return Err(Error::CapExceeded { cap });
                }
            }
        }
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
