//! Hamiltonians of the two-mode Kerr model, phase classification and the
//! closed-form ground-state results.

mod ground;
mod hamiltonian;
mod params;
mod perturbation;
mod phase;
mod rotate;

pub use ground::{analyze_ground, default_cutoff, CutoffChoice, GroundAnalysis, RECHECK_STEP};
pub use hamiltonian::{build_hamiltonian_ab, build_hamiltonian_alphabeta, build_sbf_hamiltonian};
pub use params::ModelParams;
pub use perturbation::{perturbative_energy_shift, PerturbationBranch, PerturbativeShift};
pub use phase::{classify_phase, fock_condensate_entropy, Phase, PhaseClassification, TIE_TOLERANCE};
pub use rotate::{rotate_modes, Rotation};
