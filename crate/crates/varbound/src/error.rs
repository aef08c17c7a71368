use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max |M - M^H| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized (norm = {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("state dimension must be at least 2 (got {dim})")]
    DimTooSmall { dim: usize },

    #[error("vector norm below zero threshold ({norm:.3e})")]
    ZeroVector { norm: f64 },

    #[error("need at least 2 vectors (got {count})")]
    TooFewVectors { count: usize },

    #[error("degenerate variance: standard deviation {std:.3e} below {eps:.1e}")]
    DegenerateVariance { std: f64, eps: f64 },

    #[error("states are not orthogonal (|overlap| = {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },

    #[error("singular denominator: covariance saturates Cauchy-Schwarz")]
    SingularDenominator,

    #[error("states are parallel (residual norm {residual:.3e})")]
    ParallelStates { residual: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("Fock cutoff too small: need at least {min}, got {got}")]
    CutoffTooSmall { min: usize, got: usize },

    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
