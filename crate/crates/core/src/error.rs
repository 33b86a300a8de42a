use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("expected {expected} per-vertex samples, got {got}")]
    SampleCount { expected: usize, got: usize },

    #[error("degenerate triangle {index} (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("solver failure: {reason} (residual {residual:e}, condition estimate {condition:e})")]
    Solver {
        reason: String,
        residual: f64,
        condition: f64,
    },

    #[error("point {point:?} lies inside the closed domain")]
    InsideDomain { point: [f64; 3] },

    #[error("point {point:?} is {distance:e} from the boundary, inside the exclusion shell of width {clearance:e}")]
    NearSurface {
        point: [f64; 3],
        distance: f64,
        clearance: f64,
    },

    #[error("suspected critical point at vertex {vertex}: |Du| = {grad_norm:e} at u = {u}")]
    CriticalPoint { vertex: usize, u: f64, grad_norm: f64 },

    #[error("gradient vanishes at {point:?}")]
    VanishingGradient { point: [f64; 3] },

    #[error("root polish did not converge at vertex {vertex} (residual {residual:e})")]
    PolishFailed { vertex: usize, residual: f64 },

    #[error("target level u = {target} cannot be reached from vertex {vertex} (start u = {start})")]
    LevelOutOfRange { vertex: usize, start: f64, target: f64 },

    #[error("normal of transported level deviates {degrees:.2} deg from the mesh normal at vertex {vertex}")]
    OrientationMismatch { vertex: usize, degrees: f64 },

    #[error("level transport failed at tau = {tau}: {source}")]
    Transport {
        tau: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
