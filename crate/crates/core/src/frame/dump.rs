use serde::Serialize;

use super::normalizer::{Normalizer, NormalizerChecks};
use super::search::FrankelFrame;
use crate::domains::DomainSpec;
use crate::numerics::{CMatrix, CVector};

/// JSON dump of a frame, its normalizer and every check margin.
#[derive(Debug, Clone, Serialize)]
pub struct FrameDump {
    pub contacts: Vec<CVector>,
    pub radii: Vec<f64>,
    pub t: CMatrix,
    pub a: CMatrix,
    pub composite: CMatrix,
    pub functionals: Vec<CVector>,
    pub margins: FrameMargins,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameMargins {
    pub orthogonality: f64,
    pub radius_monotonicity: f64,
    /// Largest distance from a contact to the boundary point found along its ray.
    pub boundary: f64,
    pub search_spread: Vec<f64>,
    pub triangularity: Vec<f64>,
    pub functional_validation: Vec<f64>,
    pub normalizer: NormalizerChecks,
}

impl FrameDump {
    pub fn new(d: &DomainSpec, frame: &FrankelFrame, normalizer: &Normalizer, checks: NormalizerChecks) -> Self {
        let n = frame.dim();
        let boundary = frame
            .contacts
            .iter()
            .zip(&frame.radii)
            .map(|(a, r)| match d.ray_exit(&CVector::zeros(n), a) {
                Ok(t) => (t - r).abs(),
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max);
        FrameDump {
            contacts: frame.contacts.clone(),
            radii: frame.radii.clone(),
            t: normalizer.t.clone(),
            a: normalizer.a.clone(),
            composite: normalizer.composite.clone(),
            functionals: normalizer.functionals.iter().map(|f| f.coefficients.clone()).collect(),
            margins: FrameMargins {
                orthogonality: frame.orthogonality_defect(),
                radius_monotonicity: frame.monotonicity_defect(),
                boundary,
                search_spread: frame.searches.iter().map(|s| s.spread).collect(),
                triangularity: normalizer.triangularity_margins.clone(),
                functional_validation: normalizer.functionals.iter().map(|f| f.validation_margin).collect(),
                normalizer: checks,
            },
        }
    }
}
