//! Truncated Fock spaces for one and two bosonic modes.

pub mod cutoff;
pub mod eigen;
pub mod entropy;
pub mod operator;
pub mod partition;
pub mod propagate;
pub mod sparse;
pub mod state;

pub use cutoff::{FockCutoff, TwoModeCutoff};
pub use eigen::{
    ground_state, ground_state_with, hermitian_eigen, lanczos_lowest, lowest_energies, lowest_levels, DenseEigen,
    EigenPair, GroundState, SolverOptions,
};
pub use entropy::{entanglement_entropy, low_rank_schmidt_weights, LOW_RANK_THRESHOLD, schmidt_coefficients, schmidt_entropy, von_neumann_entropy};
pub use operator::{ladder_operators, Ladder, ModeOperator};
pub use propagate::{krylov_evolve, propagate, Propagator};
pub use sparse::{kron, tensor, SparseBlock, TwoModeOperator};
pub use state::{coherent_state, partial_trace, single_mode_coherent, CoherentState, DensityMatrix, Mode, PureState};
pub use partition::{level_shift, partitioned_shift};
