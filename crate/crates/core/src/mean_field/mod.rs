//! Shifted-frame mean-field theory with a symmetry-breaking field and the
//! Bogoliubov treatment of the quadratic fluctuations.

mod bogoliubov;
mod curve;
mod squeezing;
mod stationary;
mod wavefunction;

pub use bogoliubov::{bogoliubov_params, weak_coupling_report, BogoliubovParams, WeakCouplingReport, SQUEEZING_THRESHOLD};
pub use curve::{quadratic_check, sbf_entropy_curve, QuadraticCheck, SbfPoint};
pub use squeezing::{
    fluctuation_diagnostic, quadratic_alpha_hamiltonian, quadratic_alpha_hamiltonian_from, squeeze_cutoff,
    squeezed_by_exponential, squeezed_ground_entropy, squeezed_vacuum, FluctuationDiagnostic,
};
pub use stationary::{
    mean_field_energy, stationarity, stationary_amplitude, zero_field_amplitude, Branch, CondensateSolution,
};
pub use wavefunction::{ground_wavefunction, GroundWavefunction};
