//! Certified universal lower bounds, explicit witness maps, and the sampled
//! containment and inscribed-radius checks behind them.

mod certify;
mod inscribed;
mod shapes;
mod witness;

pub use certify::{
    certify, extremal_probes, frame_and_normalizer, simplex_image_margins, simplex_image_margins_for, BoundReport,
    CertifyConfig, PipelineMargins, StageEstimate, WitnessSummary,
};
pub use inscribed::{inscribed_radius_estimate, InscribedEstimate};
pub use shapes::{containment_check, ContainmentReport, Outer, ShapeDescriptor, ShapeKind};
pub use witness::{
    enclosing_circle, planar_projections, witness_eval, DiscFit, PlanarProjection, Target, WitnessMap, FIT_TOL,
    PROJECTION_BINS,
};
