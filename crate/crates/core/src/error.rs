use thiserror::Error;

/// Errors raised by state construction, walk operators, measures and runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {0} is below the minimum of 2")]
    TooFewQubits(usize),
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state norm {0} deviates from 1")]
    NotNormalized(f64),
    #[error("zero-norm vector cannot be normalized")]
    ZeroNorm,
    #[error("vertex index {index} out of range for {count} vertices")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("target {0} has odd Hamming weight; the optimized walk only admits even-parity targets")]
    OddParityTarget(usize),
    #[error("even-parity projection of the state is zero")]
    ZeroEvenProjection,
    #[error("{what}: size {size} exceeds guard {limit}")]
    Guard { what: &'static str, size: usize, limit: usize },
    #[error("resource report lacks {0}, required by this prediction")]
    MissingResource(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
