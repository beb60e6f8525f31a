use thiserror::Error;

/// Errors surfaced by the evolutionary engine.
#[derive(Debug, Error)]
pub enum MoeaError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
}

/// Errors from quality-indicator computations.
#[derive(Debug, Error)]
pub enum IndicatorError {
    #[error("hypervolume is only implemented for two objectives (got {0})")]
    NotTwoDimensional(usize),
    #[error("front point {point:?} does not dominate the reference point {reference:?}")]
    PointBeyondReference {
        point: Vec<f64>,
        reference: Vec<f64>,
    },
    #[error("degenerate bounds for objective {0}: max must exceed min")]
    DegenerateBounds(usize),
}

/// Errors from cloud instance and genome handling.
#[derive(Debug, Error)]
pub enum CloudError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid genome: {0}")]
    InvalidGenome(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error for {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
