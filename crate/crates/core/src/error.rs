use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: only 2, 4 and 8 are allowed")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("hermiticity violated: max |a - a^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace invariant violated: trace = {re} + {im}i, expected 1")]
    InvalidTrace { re: f64, im: f64 },

    #[error("positivity invariant violated: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("operator is not a projector: max |P^2 - P| = {deviation:e}")]
    NotProjector { deviation: f64 },

    #[error("post-selection outcome has probability {probability:e}")]
    ZeroProbability { probability: f64 },

    #[error("variance {0:e} is negative beyond tolerance")]
    NegativeVariance(f64),

    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),

    #[error("invalid subsystem selector: {0}")]
    InvalidSelector(String),

    #[error("invalid axis choice: {0}")]
    InvalidAxes(String),

    #[error("rank {rank} out of range for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}
