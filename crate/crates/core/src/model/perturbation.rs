use crate::scalar::Real;

use super::params::ModelParams;
use super::phase::{classify_phase, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationBranch {
    NormalSecondOrder,
    CondensateSecondOrder,
    DegenerateFirstOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeShift<T: Real> {
    pub delta_e: T,
    pub branch: PerturbationBranch,
    /// False once λ ≥ g, where the level spreading exceeds the gap.
    pub valid: bool,
}

/// Low-order ground-energy shift caused by the field −λ(α† + α).
///
/// Away from boundaries this is the second-order sum over the neighbouring
/// α levels; at a boundary, the splitting of the degenerate pair.
pub fn perturbative_energy_shift<T: Real>(params: &ModelParams<T>) -> PerturbativeShift<T> {
    let lambda = params.lambda;
    let valid = lambda < params.g;
    let class = classify_phase(params);
    let (delta_e, branch) = match class.phase {
        Phase::DegenerateBoundary { lower } => (
            -lambda * T::from_count(lower + 1).sqrt(),
            PerturbationBranch::DegenerateFirstOrder,
        ),
        phase => {
            let n = class.n_alpha();
            let e_n = params.alpha_level(n);
            let mut sum = T::from_count(n + 1) / (params.alpha_level(n + 1) - e_n);
            if n > 0 {
                sum += T::from_count(n) / (params.alpha_level(n - 1) - e_n);
            }
            let branch = if phase == Phase::Normal {
                PerturbationBranch::NormalSecondOrder
            } else {
                PerturbationBranch::CondensateSecondOrder
            };
            (-lambda * lambda * sum, branch)
        }
    };
    PerturbativeShift { delta_e, branch, valid }
}
