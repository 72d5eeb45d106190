use thiserror::Error;

/// Errors raised by the planner and verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("target is nonzero at ({row}, {col}) where the divisor is zero")]
    ZeroMismatch { row: usize, col: usize },

    #[error("overhead parameter mu must be positive, got {0}")]
    NonPositiveMu(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("{what} must be at least {min}, got {value}")]
    TooSmall { what: &'static str, value: usize, min: usize },

    #[error("{what} must be even, got {value}")]
    NotEven { what: &'static str, value: usize },

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric with zero diagonal")]
    NotZeroDiagonalSymmetric,

    #[error("target must have 0/1 weights")]
    NotZeroOne,

    #[error("block for node {node} in step {step} is not orthogonal")]
    NonOrthogonalBlock { step: usize, node: usize },

    #[error("size {n} exceeds the limit {max} for {what}")]
    SizeExceeded { what: &'static str, n: usize, max: usize },

    #[error("target is zero; the overhead bound degenerates")]
    ZeroTarget,

    #[error("coupling does not match the requested case: {0}")]
    CouplingMismatch(String),

    #[error("coupling matrix is zero")]
    ZeroCoupling,

    #[error("natural coupling graph must be complete; pair ({row}, {col}) has zero weight")]
    IncompleteNatural { row: usize, col: usize },

    #[error("invalid clique partition: {0}")]
    InvalidPartition(String),

    #[error("invalid sign pattern: {0}")]
    InvalidSignPattern(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("step durations must be positive")]
    NonPositiveTime,

    #[error("cannot compose an empty list of schemes")]
    EmptyComposition,

    #[error("matrix is empty")]
    EmptyMatrix,
}

pub type Result<T> = std::result::Result<T, Error>;
