use thiserror::Error;

/// Errors raised by the geometry, solver, merge and margin routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("direction vector has (numerically) zero norm")]
    ZeroDirection,
    #[error("point {index} has (numerically) zero norm")]
    ZeroPoint { index: usize },
    #[error("optimum norm must be positive, got {0}")]
    DegenerateOptimum(f64),
    #[error("invalid convex combination: {0}")]
    InvalidWeights(String),
    #[error("index {index} out of range for a point set of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("origin lies inside (or on) the convex hull; no positive-distance solution")]
    OriginInsideHull,
    #[error("iteration limit of {limit} reached with epsilon_hat = {epsilon_hat}")]
    IterationLimit { limit: usize, epsilon_hat: f64 },
    #[error("brute-force oracle supports at most {max} points, got {found}")]
    TooManyPoints { max: usize, found: usize },
    #[error("oracle grid resolution must be at least {min}, got {found}")]
    BadResolution { min: usize, found: usize },
    #[error("angular diameter {theta} exceeds pi/2")]
    WideAngle { theta: f64 },
    #[error("theta must lie in (0, pi/2], got {0}")]
    BadTheta(f64),
    #[error("merge requires singleton coresets: {0}")]
    NotSingleton(String),
    #[error("malformed adversarial instance: {0}")]
    MalformedInstance(String),
    #[error("labels are invalid: {0}")]
    InvalidLabels(String),
    #[error("labeled data is not homogeneously separable with positive margin")]
    NotSeparable,
    #[error("margin result does not belong to this labeled set: {0}")]
    Mismatch(String),
    #[error("empty stream")]
    EmptyStream,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
