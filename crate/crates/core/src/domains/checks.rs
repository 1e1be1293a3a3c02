//! Sampled spot checks of the declared convexity class.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::DomainSpec;
use crate::error::Result;
use crate::numerics::CVector;
use crate::sampling::{self, Purpose};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub trials: usize,
    pub failures: usize,
    /// First failing configuration, if any.
    pub witness: Option<Vec<CVector>>,
}

impl ConvexityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Midpoints of sampled pairs must be interior for a convex set. Half the
/// pairs are independent interior points; the other half are short chords
/// between points just inside the boundary, which catch local concavity.
pub fn midpoint_convexity_check(d: &DomainSpec, pairs: usize, seed: u64) -> Result<ConvexityCheck> {
    let mut rng = sampling::stream(seed, Purpose::Convexity, 0);
    let origin = CVector::zeros(d.dim());
    let retract = |p: CVector| -> Result<CVector> {
        let t = d.ray_exit(&origin, &p)?;
        Ok(p.scale(t * (1.0 - 1e-9) / p.norm()))
    };
    let mut failures = 0;
    let mut witness = None;
    for k in 0..pairs {
        let (p, q) = if k % 2 == 0 {
            (d.sample_interior(&mut rng)?, d.sample_interior(&mut rng)?)
        } else {
            let b = d.sample_boundary(&mut rng)?;
            let v = sampling::unit_sphere(&mut rng, d.dim());
            let eps = b.norm() * 10f64.powf(-3.0 + 2.5 * rng.random::<f64>());
            (retract(&b + &v.scale(eps))?, retract(&b - &v.scale(eps))?)
        };
        let m = (&p + &q).scale(0.5);
        if !d.contains_unchecked(&m) {
            failures += 1;
            witness.get_or_insert_with(|| vec![p, q, m]);
        }
    }
    Ok(ConvexityCheck { trials: pairs, failures, witness })
}

/// Grid side used by [`slice_connectivity_check`].
const SLICE_GRID: usize = 121;

/// Necessary condition for C-convexity: random complex-line slices through
/// interior points are connected and have no holes (checked on a grid).
pub fn slice_connectivity_check(d: &DomainSpec, lines: usize, seed: u64) -> Result<ConvexityCheck> {
    let n = d.dim();
    let mut failures = 0;
    let mut witness = None;
    for line in 0..lines {
        let mut rng = sampling::stream(seed, Purpose::Convexity, 1 + line as u64);
        let p = d.sample_interior(&mut rng)?;
        let v = sampling::unit_sphere(&mut rng, n);
        let mut reach = 0.0f64;
        for k in 0..64 {
            let dir = v.scale_c(Complex64::from_polar(1.0, TAU * k as f64 / 64.0));
            reach = reach.max(d.ray_exit(&p, &dir)?);
        }
        let r = 2.0 * reach;
        let g = SLICE_GRID;
        let cell = |i: usize, j: usize| {
            let x = -r + 2.0 * r * i as f64 / (g - 1) as f64;
            let y = -r + 2.0 * r * j as f64 / (g - 1) as f64;
            &p + &v.scale_c(Complex64::new(x, y))
        };
        let mask: Vec<bool> = (0..g * g).map(|ij| d.contains_unchecked(&cell(ij / g, ij % g))).collect();
        let (inside_parts, _) = components(&mask, g, true);
        let (outside_parts, touching) = components(&mask, g, false);
        if inside_parts > 1 || outside_parts > touching {
            failures += 1;
            witness.get_or_insert_with(|| vec![p.clone(), v.clone()]);
        }
    }
    Ok(ConvexityCheck { trials: lines, failures, witness })
}

/// Counts 4-connected components of cells equal to `value`; also returns how
/// many of them touch the grid border.
fn components(mask: &[bool], g: usize, value: bool) -> (usize, usize) {
    let mut seen = vec![false; mask.len()];
    let mut count = 0;
    let mut touching = 0;
    for start in 0..mask.len() {
        if seen[start] || mask[start] != value {
            continue;
        }
        count += 1;
        let mut border = false;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(c) = queue.pop_front() {
            let (i, j) = (c / g, c % g);
            border |= i == 0 || j == 0 || i == g - 1 || j == g - 1;
            let mut push = |ni: usize, nj: usize| {
                let k = ni * g + nj;
                if !seen[k] && mask[k] == value {
                    seen[k] = true;
                    queue.push_back(k);
                }
            };
            if i > 0 {
                push(i - 1, j);
            }
            if i + 1 < g {
                push(i + 1, j);
            }
            if j > 0 {
                push(i, j - 1);
            }
            if j + 1 < g {
                push(i, j + 1);
            }
        }
        if border {
            touching += 1;
        }
    }
    (count, touching)
}
