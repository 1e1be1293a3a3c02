use rayon::prelude::*;
use serde::Serialize;

use super::shapes::ShapeKind;
use crate::domains::{first_exit, ExitStrategy};
use crate::error::{Error, Result};
use crate::numerics::CVector;
use crate::sampling::{self, Purpose};

/// Empirical inscribed radius of a star-shaped-looking set from ray samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InscribedEstimate {
    pub shape: ShapeKind,
    /// `upper * (1 - angular_resolution)`.
    pub lower: f64,
    /// Smallest exit radius found; the true inscribed radius is at most this.
    pub upper: f64,
    pub rays: usize,
    pub angular_resolution: f64,
}

/// Exit radius along `v` measured in the shape's own norm.
fn shape_exit<F>(inside: &F, kind: ShapeKind, x: &[f64], cap: f64, strategy: ExitStrategy) -> Result<f64>
where
    F: Fn(&CVector) -> bool,
{
    let v = CVector::from_real_coords(x);
    let g = kind.gauge(&v);
    if g == 0.0 {
        return Err(Error::Domain("zero direction".into()));
    }
    let unit = v.normalized().expect("nonzero");
    let t = first_exit(inside, &CVector::zeros(v.dim()), &unit, cap, strategy)?;
    // along unit (2-norm one) the shape gauge grows like t * gauge(unit)
    Ok(t * kind.gauge(&unit))
}

/// Ray sampling followed by a compass refinement of the best few rays.
pub fn inscribed_radius_estimate<F>(
    inside: F,
    n: usize,
    shape: ShapeKind,
    rays: usize,
    seed: u64,
    cap: f64,
    strategy: ExitStrategy,
) -> Result<InscribedEstimate>
where
    F: Fn(&CVector) -> bool + Sync,
{
    if n == 0 || rays == 0 {
        return Err(Error::Domain("need n >= 1 and at least one ray".into()));
    }
    if !inside(&CVector::zeros(n)) {
        return Err(Error::NotInterior);
    }
    let starts: Vec<Vec<f64>> = {
        let mut rng = sampling::stream(seed, Purpose::Inscribed, n as u64);
        // coordinate axes and their negatives first: extremal for coordinate-product images
        let mut dirs: Vec<CVector> = Vec::new();
        for k in 0..n {
            dirs.push(CVector::basis(n, k));
            dirs.push(CVector::basis(n, k).scale(-1.0));
        }
        while dirs.len() < rays.max(2 * n) {
            dirs.push(shape.sample_boundary(&mut rng, n));
        }
        dirs.iter().map(|d| d.to_real_coords()).collect()
    };
    let exits: Vec<Result<f64>> = starts.par_iter().map(|x| shape_exit(&inside, shape, x, cap, strategy)).collect();
    let exits = exits.into_iter().collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..exits.len()).collect();
    order.sort_by(|&a, &b| exits[a].total_cmp(&exits[b]).then(a.cmp(&b)));
    let refined: Vec<Result<f64>> = order
        .iter()
        .take(8)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| refine(&inside, shape, starts[i].clone(), exits[i], cap, strategy))
        .collect();
    let mut upper = exits.iter().copied().fold(f64::INFINITY, f64::min);
    for r in refined {
        upper = upper.min(r?);
    }
    let real_dim = (2 * n) as f64;
    let angular_resolution = (exits.len() as f64).powf(-1.0 / (real_dim - 1.0).max(1.0)).min(1.0);
    Ok(InscribedEstimate { shape, lower: upper * (1.0 - angular_resolution), upper, rays: exits.len(), angular_resolution })
}

fn refine<F>(inside: &F, shape: ShapeKind, mut x: Vec<f64>, mut f: f64, cap: f64, strategy: ExitStrategy) -> Result<f64>
where
    F: Fn(&CVector) -> bool,
{
    let mut step = 0.25;
    let mut polls = 0;
    while step > 1e-7 && polls < 200 {
        polls += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * step;
                let fy = match shape_exit(inside, shape, &y, cap, strategy) {
                    Ok(v) => v,
                    Err(Error::Domain(_)) => continue,
                    Err(e) => return Err(e),
                };
                if fy < f * (1.0 - 1e-15) {
                    x = y;
                    f = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(f)
}
