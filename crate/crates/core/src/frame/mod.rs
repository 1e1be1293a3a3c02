//! Nested nearest boundary points and the normalizing maps `T` and `A`.

mod dump;
mod normalizer;
mod search;

pub use dump::FrameDump;
pub use normalizer::{build_normalizer, Normalizer, NormalizerChecks, ALPHA_TOL, TRIANGULARITY_TOL};
pub use search::{build_frame, min_boundary_point, FrankelFrame, SearchConfig, SearchOutcome};

#[cfg(test)]
mod tests;
