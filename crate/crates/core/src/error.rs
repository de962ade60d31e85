use thiserror::Error;

/// Errors surfaced by the geometry, dynamics and Lie-algebra layers.
#[derive(Debug, Error)]
pub enum EkError {
    #[error("epsilon mismatch: {0} vs {1}")]
    EpsilonMismatch(i8, i8),
    #[error("point outside chart domain: {0:?}")]
    OutOfDomain(Vec<f64>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("metric is near-degenerate (condition number {cond:.3e})")]
    NearDegenerateMetric { cond: f64 },
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("chart carries no {0} structure")]
    MissingStructure(&'static str),
    #[error("curvature form fit undefined: theta vanishes at the sample point")]
    FitUndefined,
    #[error("depth {0} exceeds the supported covariant-derivative depth {1}")]
    DepthTooLarge(usize, usize),
    #[error("problem size out of desk range: {0}")]
    ResourceLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bracket closure failed to stabilize after {0} rounds")]
    ClosureFailed(usize),
    #[error("frame construction failed: {0}")]
    FrameConstruction(String),
}

pub type Result<T> = std::result::Result<T, EkError>;
