use thiserror::Error;

use crate::geom::Point;

/// Errors raised by the library. Algorithmic outcomes such as an aborted
/// randomized run or a no-instance verdict are values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate {value} is outside the supported range |v| < 2^31")]
    CoordinateOutOfRange { value: i128 },

    #[error("a line needs two distinct points, got {0} twice")]
    IdenticalPoints(Point),

    #[error("degenerate line coefficients (a, b) = (0, 0)")]
    DegenerateLine,

    #[error("line ({a}, {b}, {c}) is not in canonical form")]
    NonCanonicalLine { a: i64, b: i64, c: i128 },

    #[error("duplicate point {point} at position {index}")]
    DuplicatePoint { point: Point, index: usize },

    #[error("need at least {required} points, got {actual}")]
    TooFewPoints { required: usize, actual: usize },

    #[error("cannot sample {requested} points from a set of {available}")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("invalid sample size {0}")]
    InvalidSampleSize(usize),

    #[error("lambda = {lambda} is outside [2, {n}]")]
    LambdaOutOfRange { lambda: usize, n: usize },

    #[error("invalid parameter k = {k}: {reason}")]
    InvalidK { k: usize, reason: &'static str },

    #[error("batch must contain exactly {expected} points, got {actual}")]
    BatchSize { expected: usize, actual: usize },

    #[error("exact solver is limited to |S| <= {max_points} and k <= {max_k} (got |S| = {points}, k = {k})")]
    SolverBounds {
        points: usize,
        k: usize,
        max_points: usize,
        max_k: usize,
    },

    #[error("generator gave up after {attempts} attempts: {what}")]
    GeneratorExhausted { what: &'static str, attempts: usize },

    #[error("invalid generator argument: {0}")]
    InvalidGeneratorArgs(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
