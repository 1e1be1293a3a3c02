use thiserror::Error;

/// Errors raised anywhere in the certification pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rank-deficient input: {0}")]
    RankDeficient(String),

    #[error("matrix shape error: {0}")]
    Shape(String),

    #[error("singular matrix")]
    Singular,

    #[error("unbounded or degenerate beyond cap {cap} along the requested ray")]
    CapExceeded { cap: f64 },

    #[error("base point is not interior to the domain")]
    NotInterior,

    #[error("nonsmooth boundary point: {0}")]
    NonsmoothPoint(String),

    #[error("tangent functional validation failed: {violations} sampled points on the wrong side")]
    ValidationFailure { violations: usize },

    #[error("frame degenerate: radius {radius:e} at contact {index}")]
    FrameDegenerate { index: usize, radius: f64 },

    #[error("triangularity violation at row {row}: coefficient {col} has modulus {modulus:e}")]
    TriangularityViolation { row: usize, col: usize, modulus: f64 },

    #[error("alpha bound violation: |alpha[{row}][{col}]| = {modulus}")]
    AlphaBoundViolation { row: usize, col: usize, modulus: f64 },

    #[error("pipeline check `{check}` failed (worst margin {margin:e})")]
    PipelineCheck { check: String, margin: f64 },

    #[error("declared class `convex` contradicted: {0}")]
    ClassMismatch(String),

    #[error("unsupported planar shape: {0}")]
    UnsupportedShape(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
