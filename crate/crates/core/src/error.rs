use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("coherent amplitude |z|^2 = {norm_sqr} exceeds n_max/4 for cutoff n_max = {n_max}")]
    AmplitudeTooLarge { norm_sqr: f64, n_max: usize },

    #[error("density matrix trace deviates from 1 by {0:.3e}")]
    TraceDeviation(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("squeezing divergence: tanh 2θ → −1 (λ = 0 on the superfluid branch)")]
    SqueezingDivergence,

    #[error("non-normalizable wavefunction: {0}")]
    NonNormalizable(String),

    #[error("uncertainty relation violated by {0:.3e}")]
    UncertaintyViolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
