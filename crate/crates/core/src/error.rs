use thiserror::Error;

/// Errors raised by the spectral, simulation and harness layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("eigenfunction index {index} out of range (truncation has {len} modes)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("t = {t} is below the truncated-series cutoff {min}; raise the truncation N")]
    TimeBelowCutoff { t: f64, min: f64 },
    #[error("order alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("function is not mean-zero (coefficient f_0 = {0})")]
    NotMeanZero(f64),
    #[error("operands live on different manifolds")]
    ManifoldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel diverges on the diagonal for alpha = {alpha} <= d/2 = {half_dim}")]
    DiagonalDivergent { alpha: f64, half_dim: f64 },
    #[error("quadrature achieved error {achieved:e}, requested {requested:e}")]
    QuadratureTolerance { achieved: f64, requested: f64 },
    #[error("step would pass the horizon T_max = {0}")]
    HorizonExceeded(f64),
    #[error("normalization sqrt(2t log log t) undefined for t = {0} < 3")]
    NormalizationUndefined(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("Green-Gram matrix is singular or ill-conditioned (condition number {0:e})")]
    SingularGram(f64),
    #[error("target is not strictly inside the ellipsoid (form value {0})")]
    TargetNotInterior(f64),
    #[error("alpha = {alpha} is not admissible; need alpha > {min}")]
    AlphaNotAdmissible { alpha: f64, min: f64 },
    #[error("empty time grid")]
    EmptyGrid,
    #[error("requested {requested} observables but the truncation has only {available} modes")]
    BasisTooLarge { requested: usize, available: usize },
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
