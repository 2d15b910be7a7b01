//! Gaussian evolution of the factorized coherent state under the quadratic
//! theory, and a Fock-space propagation oracle for it.

mod coefficients;
mod evolution;
mod gaussian;
mod oracle;
mod sensitivity;
mod wavefunction;

pub use coefficients::{heisenberg_coefficients, EvolutionCoefficients};
pub use evolution::{dynamical_entropy, Dynamics};
pub use gaussian::{alpha_quadrature_map, covariance_from_coefficients, mode_entropy, symplectic_form, GaussianState};
pub use oracle::{fock_dynamics_oracle, oracle_cutoff, FockDynamicsOracle, OracleSample, EDGE_TOLERANCE, EDGE_WIDTH};
pub use sensitivity::{
    short_time_sbf_sensitivity, SensitivityCurve, SensitivityReport, FREE_DIFFUSION_FRACTION, LATE_WINDOW,
    SHORT_TIME_LIMIT,
};
pub use wavefunction::{evolved_wavefunction, EvolvedWavefunction, WavefunctionConvention};
