use rayon::prelude::*;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::numerics::{orthonormal_complement, project, CVector, Complex64};
use crate::sampling::{self, Purpose};

/// Budget and seed of the nearest-boundary-point search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Random starts per complex dimension of the searched subspace.
    pub starts_per_dim: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { starts_per_dim: 64, seed: 0 }
    }
}

/// Relative exit-distance window inside which directions count as tied.
const TIE_TOL: f64 = 1e-8;
/// Per-coordinate tolerance of the tie-break comparison.
const KEY_TOL: f64 = 1e-6;
/// Relative disagreement between polished starts that raises the spread flag.
const SPREAD_TOL: f64 = 1e-3;
const COMPASS_MIN_STEP: f64 = 1e-9;
const ALIGN_ITERS: usize = 60;
const GOLDEN_BRACKET: f64 = 1e-5;
/// Improvements below this relative size are rounding noise of the exit distance.
const NOISE: f64 = 1e-15;
const COMPASS_MAX_POLLS: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub contact: CVector,
    pub radius: f64,
    pub direction: CVector,
    /// `(worst - best) / best` over the polished starts.
    pub spread: f64,
    /// Set when some polished start ended more than 1e-3 (relative) above the best.
    pub starts_disagree: bool,
    pub starts: usize,
}

/// Nearest boundary point of `d` from the origin within the complex span of
/// `basis` (orthonormal).
pub fn min_boundary_point(d: &DomainSpec, basis: &[CVector], config: &SearchConfig) -> Result<SearchOutcome> {
    search(d, basis, config, 0)
}

fn search(d: &DomainSpec, basis: &[CVector], config: &SearchConfig, stage: u64) -> Result<SearchOutcome> {
    let n = d.dim();
    let m = basis.len();
    if m == 0 {
        return Err(Error::Shape("empty subspace basis".into()));
    }
    if let Some(b) = basis.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
    }
    if !d.contains(&CVector::zeros(n))? {
        return Err(Error::NotInterior);
    }
    let problem = Problem { d, basis };
    let starts = (config.starts_per_dim * m).max(1);

    let polished: Vec<Result<(Vec<f64>, f64)>> = (0..starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = sampling::stream(config.seed, Purpose::FrameStarts, stage << 32 | s as u64);
            let start = sampling::unit_sphere(&mut rng, m).to_real_coords();
            problem.local_search(start)
        })
        .collect();
    let polished = polished.into_iter().collect::<Result<Vec<_>>>()?;

    let best = polished.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let worst = polished.iter().map(|p| p.1).fold(0.0, f64::max);
    let spread = (worst - best) / best;

    // tied directions, plus snapped variants that land exactly on symmetric points
    let mut candidates: Vec<(CVector, f64)> = Vec::new();
    for (x, f) in &polished {
        if *f <= best * (1.0 + TIE_TOL) {
            candidates.push((problem.direction(x), *f));
        }
    }
    let mut extra: Vec<CVector> = Vec::new();
    for (v, _) in &candidates {
        extra.push(phase_normalized(v));
        extra.push(zero_snapped(v));
        if let Some(u) = project(&v.moduli(), basis).normalized() {
            extra.push(u);
        }
    }
    extra.extend(basis.iter().map(phase_normalized));
    for k in 0..n {
        if let Some(u) = project(&CVector::basis(n, k), basis).normalized() {
            extra.push(u);
        }
    }
    let extra: Vec<CVector> = extra.into_iter().filter_map(|v| project(&v, basis).normalized()).collect();
    let evaluated: Vec<Result<(CVector, f64)>> = extra
        .into_par_iter()
        .map(|v| {
            let f = d.ray_exit(&CVector::zeros(n), &v)?;
            Ok((v, f))
        })
        .collect();
    for e in evaluated {
        let (v, f) = e?;
        if f <= best * (1.0 + TIE_TOL) {
            candidates.push((v, f));
        }
    }
    let best = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let (direction, radius) = candidates
        .into_iter()
        .filter(|c| c.1 <= best * (1.0 + TIE_TOL))
        .min_by(|a, b| tie_break(&a.0, &b.0))
        .expect("at least one candidate");
    let coords: CVector = basis.iter().map(|b| direction.inner(b)).collect();
    let (x, radius) = problem.stationary_polish(coords.to_real_coords(), radius)?;
    let direction = problem.direction(&x);
    let contact = direction.scale(radius);
    Ok(SearchOutcome { contact, radius, direction, spread, starts_disagree: spread > SPREAD_TOL, starts })
}

struct Problem<'a> {
    d: &'a DomainSpec,
    basis: &'a [CVector],
}

impl Problem<'_> {
    fn direction(&self, x: &[f64]) -> CVector {
        let coeffs = CVector::from_real_coords(x);
        sampling::combine(self.basis, &coeffs).normalized().expect("nonzero direction")
    }

    fn exit(&self, x: &[f64]) -> Result<f64> {
        self.d.ray_exit(&CVector::zeros(self.d.dim()), &self.direction(x))
    }

    fn local_search(&self, start: Vec<f64>) -> Result<(Vec<f64>, f64)> {
        let (x, f) = self.compass(start)?;
        let (x, f) = self.golden_polish(x, f)?;
        self.align_polish(x, f)
    }

    /// Coordinate poll on the sphere with halving steps.
    fn compass(&self, mut x: Vec<f64>) -> Result<(Vec<f64>, f64)> {
        let dim = x.len();
        let mut f = self.exit(&x)?;
        let mut step = 0.5;
        let mut polls = 0;
        while step > COMPASS_MIN_STEP && polls < COMPASS_MAX_POLLS {
            polls += 1;
            let mut best: Option<(Vec<f64>, f64)> = None;
            for i in 0..dim {
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] += sign * step;
                    normalize(&mut y);
                    let fy = self.exit(&y)?;
                    if fy < f * (1.0 - NOISE) && best.as_ref().is_none_or(|b| fy < b.1) {
                        best = Some((y, fy));
                    }
                }
            }
            match best {
                Some((y, fy)) => {
                    x = y;
                    f = fy;
                    step = (step * 2.0).min(0.5);
                }
                None => step *= 0.5,
            }
        }
        Ok((x, f))
    }

    /// Golden-section line search along the great circle through each
    /// coordinate direction.
    fn golden_polish(&self, mut x: Vec<f64>, mut f: f64) -> Result<(Vec<f64>, f64)> {
        let dim = x.len();
        for i in 0..dim {
            let mut u = vec![0.0; dim];
            u[i] = 1.0;
            let dot: f64 = x[i];
            for (uk, xk) in u.iter_mut().zip(&x) {
                *uk -= dot * xk;
            }
            let len = u.iter().map(|a| a * a).sum::<f64>().sqrt();
            if len < 1e-6 {
                continue;
            }
            u.iter_mut().for_each(|a| *a /= len);
            let along = |t: f64| -> Vec<f64> { x.iter().zip(&u).map(|(a, b)| a * t.cos() + b * t.sin()).collect() };
            let (mut lo, mut hi) = (-GOLDEN_BRACKET, GOLDEN_BRACKET);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let mut c = hi - g * (hi - lo);
            let mut e = lo + g * (hi - lo);
            let mut fc = self.exit(&along(c))?;
            let mut fe = self.exit(&along(e))?;
            for _ in 0..40 {
                if fc < fe {
                    hi = e;
                    e = c;
                    fe = fc;
                    c = hi - g * (hi - lo);
                    fc = self.exit(&along(c))?;
                } else {
                    lo = c;
                    c = e;
                    fc = fe;
                    e = lo + g * (hi - lo);
                    fe = self.exit(&along(e))?;
                }
            }
            let t = 0.5 * (lo + hi);
            let y = along(t);
            let fy = self.exit(&y)?;
            if fy < f {
                x = y;
                f = fy;
            }
        }
        Ok((x, f))
    }

    /// At a smooth nearest point the projected normal is parallel to the
    /// direction; iterating `v <- P(normal(r(v) v))` sharpens the direction
    /// well below the resolution of the exit distance.
    fn align_polish(&self, mut x: Vec<f64>, mut f: f64) -> Result<(Vec<f64>, f64)> {
        for _ in 0..ALIGN_ITERS {
            let v = self.direction(&x);
            let Ok(g) = self.d.conj_gradient(&v.scale(f)) else {
                break;
            };
            let coeffs: CVector = self.basis.iter().map(|b| g.inner(b)).collect();
            let Some(coeffs) = coeffs.normalized() else { break };
            let y = coeffs.to_real_coords();
            let fy = self.exit(&y)?;
            if fy > f * (1.0 + 1e-12) {
                break;
            }
            let moved = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = y;
            f = fy.min(f);
            if moved < 1e-15 {
                break;
            }
        }
        Ok((x, f))
    }
}

impl Problem<'_> {
    /// Component of the projected unit normal at `r(x) x` orthogonal to `x`;
    /// zero exactly at smooth critical points of the exit distance.
    fn residual(&self, x: &[f64]) -> Result<Option<(Vec<f64>, f64)>> {
        let f = self.exit(x)?;
        let Ok(g) = self.d.conj_gradient(&self.direction(x).scale(f)) else {
            return Ok(None);
        };
        let coeffs: CVector = self.basis.iter().map(|b| g.inner(b)).collect();
        let Some(normal) = coeffs.normalized() else { return Ok(None) };
        let normal = normal.to_real_coords();
        let along: f64 = normal.iter().zip(x).map(|(a, b)| a * b).sum();
        Ok(Some((normal.iter().zip(x).map(|(a, b)| a - along * b).collect(), f)))
    }

    /// Secant iterations on the residual along its own direction. Where the
    /// exit distance is nearly flat the distance alone only fixes the
    /// direction to about the square root of its rounding error; the residual
    /// is linear in the error and pins it down to near machine precision.
    fn stationary_polish(&self, mut x: Vec<f64>, mut f: f64) -> Result<(Vec<f64>, f64)> {
        let moved = |x: &[f64], u: &[f64], t: f64| {
            let mut y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + t * b).collect();
            normalize(&mut y);
            y
        };
        for _ in 0..8 {
            let Some((res, _)) = self.residual(&x)? else { break };
            let size = res.iter().map(|a| a * a).sum::<f64>().sqrt();
            if size < 1e-14 {
                break;
            }
            let u: Vec<f64> = res.iter().map(|a| a / size).collect();
            let h = |t: f64| -> Result<Option<f64>> {
                let y = moved(&x, &u, t);
                Ok(self.residual(&y)?.map(|(r, _)| r.iter().zip(&u).map(|(a, b)| a * b).sum()))
            };
            let (mut t0, mut h0) = (0.0, size);
            let mut t1 = size;
            let Some(mut h1) = h(t1)? else { break };
            for _ in 0..40 {
                if h1.abs() < 1e-16 || h1 == h0 {
                    break;
                }
                let t2 = (t1 - h1 * (t1 - t0) / (h1 - h0)).clamp(-1.0, 1.0);
                let Some(h2) = h(t2)? else { break };
                (t0, h0, t1, h1) = (t1, h1, t2, h2);
            }
            let y = moved(&x, &u, t1);
            let Some((res_y, fy)) = self.residual(&y)? else { break };
            let size_y = res_y.iter().map(|a| a * a).sum::<f64>().sqrt();
            if fy > f * (1.0 + 1e-12) || size_y >= size {
                break;
            }
            x = y;
            f = fy.min(f);
        }
        Ok((x, f))
    }
}

fn normalize(x: &mut [f64]) {
    let len = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    x.iter_mut().for_each(|a| *a /= len);
}

fn phase_normalized(v: &CVector) -> CVector {
    match v.iter().find(|c| c.norm() > KEY_TOL) {
        Some(c) => v.scale_c(c.conj() / c.norm()),
        None => v.clone(),
    }
}

fn zero_snapped(v: &CVector) -> CVector {
    phase_normalized(&v.map(|c| if c.norm() < 1e-7 { Complex64::new(0.0, 0.0) } else { c }))
}

/// Preference order among tied directions: larger real part first, then
/// smaller argument, coordinate by coordinate.
fn tie_break(a: &CVector, b: &CVector) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b.iter()) {
        if (x.re - y.re).abs() > KEY_TOL {
            return y.re.partial_cmp(&x.re).unwrap_or(Ordering::Equal);
        }
        let (ax, ay) = (arg(*x), arg(*y));
        if (ax - ay).abs() > KEY_TOL {
            return ax.partial_cmp(&ay).unwrap_or(Ordering::Equal);
        }
    }
    // within tolerance everywhere: settle exactly, favouring the least rotated
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = y.re.total_cmp(&x.re).then(arg(*x).abs().total_cmp(&arg(*y).abs()));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn arg(c: Complex64) -> f64 {
    if c.norm() < KEY_TOL {
        0.0
    } else {
        c.arg()
    }
}

/// Nested nearest boundary points `a[0..n]` with their radii and the
/// subspaces they were searched in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrankelFrame {
    pub contacts: Vec<CVector>,
    pub radii: Vec<f64>,
    /// `subspace_bases[j]` spans the orthogonal complement of `contacts[..j]`.
    pub subspace_bases: Vec<Vec<CVector>>,
    pub searches: Vec<SearchOutcome>,
}

impl FrankelFrame {
    pub fn dim(&self) -> usize {
        self.contacts.len()
    }

    /// Largest `|<a_j, a_k>|` over `j != k`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (j, a) in self.contacts.iter().enumerate() {
            for b in &self.contacts[j + 1..] {
                worst = worst.max(a.inner(b).norm());
            }
        }
        worst
    }

    /// Largest decrease `r[j] - r[j+1]` (zero when the radii are non-decreasing).
    pub fn monotonicity_defect(&self) -> f64 {
        self.radii.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max)
    }
}

pub fn build_frame(d: &DomainSpec, config: &SearchConfig) -> Result<FrankelFrame> {
    let n = d.dim();
    let mut contacts: Vec<CVector> = Vec::with_capacity(n);
    let mut radii = Vec::with_capacity(n);
    let mut subspace_bases = Vec::with_capacity(n);
    let mut searches = Vec::with_capacity(n);
    for j in 0..n {
        let basis = if j == 0 { (0..n).map(|k| CVector::basis(n, k)).collect() } else { orthonormal_complement(n, &contacts)? };
        let outcome = search(d, &basis, config, j as u64)?;
        if outcome.radius < 1e-9 {
            return Err(Error::FrameDegenerate { index: j, radius: outcome.radius });
        }
        contacts.push(outcome.contact.clone());
        radii.push(outcome.radius);
        subspace_bases.push(basis);
        searches.push(outcome);
    }
    Ok(FrankelFrame { contacts, radii, subspace_bases, searches })
}
