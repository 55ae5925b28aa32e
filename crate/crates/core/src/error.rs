use thiserror::Error;

/// Errors raised by the discrete geometry kernel.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("grid size {0} is invalid (must be even and at least 8)")]
    InvalidGrid(usize),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("grid mismatch: {left} vs {right} samples")]
    GridMismatch { left: usize, right: usize },
    #[error("curve is not immersed: speed {speed:e} at node {index}")]
    ImmersionDegenerate { index: usize, speed: f64 },
    #[error("point {index} is off the unit sphere (|x| = {norm})")]
    OffSphere { index: usize, norm: f64 },
    #[error("function must be strictly positive, minimum is {min:e}")]
    NotPositive { min: f64 },
    #[error("one-form is nonzero ({value:e}) at node {index} outside the window")]
    SupportViolation { index: usize, value: f64 },
    #[error("step {eps:e} exceeds the admissible limit {limit:e}")]
    StepTooLarge { eps: f64, limit: f64 },
    #[error("trigonometric basis of order {modes} does not fit a grid of {grid_n} nodes")]
    BasisTooLarge { modes: usize, grid_n: usize },
    #[error("could not generate an immersed curve after {attempts} rescalings")]
    GenerationFailed { attempts: usize },
    #[error("operation requires the {expected} ambient")]
    UnsupportedAmbient { expected: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
