use crate::error::Result;
use crate::fock::{entanglement_entropy, ground_state, PureState, TwoModeCutoff};
use crate::mean_field::stationary_amplitude;
use crate::scalar::Real;

use super::hamiltonian::{build_hamiltonian_ab, build_sbf_hamiltonian};
use super::params::ModelParams;
use super::rotate::{rotate_modes, Rotation};

/// Truncation request: an explicit single-mode n_max or the default rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffChoice {
    Auto,
    Fixed(usize),
}

/// Increment used for the convergence recheck.
pub const RECHECK_STEP: usize = 10;

/// max(4⌈ν²⌉, ⌈(w − ω)/(2g)⌉ + 20, 30), with ν the mean-field amplitude.
pub fn default_cutoff<T: Real>(params: &ModelParams<T>) -> Result<usize> {
    let nu = stationary_amplitude(params)?.nu.to_f64_lossy();
    let r = params.occupation_ratio().to_f64_lossy().max(0.0);
    let by_nu = 4 * (nu * nu).ceil() as usize;
    let by_ratio = r.ceil() as usize + 20;
    Ok(by_nu.max(by_ratio).max(30))
}

/// Exact-diagonalization summary of the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundAnalysis<T: Real> {
    pub n_max: usize,
    pub energy: T,
    /// a|b entanglement entropy in nats.
    pub entropy: T,
    pub gap: Option<T>,
    /// Size of the degenerate ground multiplet.
    pub degeneracy: usize,
    pub energy_change: T,
    pub entropy_change: T,
    /// Both changes under the +10 recheck are below 1e−8.
    pub converged: bool,
}

struct Level<T: Real> {
    energy: T,
    entropy: T,
    gap: Option<T>,
    degeneracy: usize,
}

fn total_occupation<T: Real>(psi: &PureState<T>) -> T {
    let (a, b) = psi.mean_occupations();
    a + b
}

fn solve_at<T: Real>(params: &ModelParams<T>, n_max: usize) -> Result<Level<T>> {
    let cut = TwoModeCutoff::square(n_max);
    let zero_field = params.lambda == T::zero();
    let h = if zero_field {
        build_hamiltonian_ab(params, cut)
    } else {
        build_sbf_hamiltonian(params, cut)
    };
    let gs = ground_state(&h)?;
    // in a degenerate multiplet take the member with the fewest photons
    let chosen = gs
        .multiplet
        .iter()
        .min_by(|x, y| total_occupation(*x).partial_cmp(&total_occupation(*y)).expect("finite"))
        .expect("non-empty multiplet");
    let entropy = if zero_field {
        entanglement_entropy(chosen)?
    } else {
        entanglement_entropy(&rotate_modes(chosen, Rotation::AlphaBetaToAb))?
    };
    Ok(Level {
        energy: gs.energy,
        entropy,
        gap: gs.gap,
        degeneracy: gs.multiplet.len(),
    })
}

/// Ground energy, gap and entanglement by exact diagonalization.
///
/// At λ = 0 the (a, b) Hamiltonian is diagonalized and traced directly;
/// with a field the (α, β) form is used and the state is rotated.
pub fn analyze_ground<T: Real>(params: &ModelParams<T>, cutoff: CutoffChoice) -> Result<GroundAnalysis<T>> {
    let n_max = match cutoff {
        CutoffChoice::Fixed(n) => n,
        CutoffChoice::Auto => default_cutoff(params)?,
    };
    let base = solve_at(params, n_max)?;
    let check = solve_at(params, n_max + RECHECK_STEP)?;
    let de = (base.energy - check.energy).abs();
    let ds = (base.entropy - check.entropy).abs();
    let tol = T::tol(1e-8);
    Ok(GroundAnalysis {
        n_max,
        energy: base.energy,
        entropy: base.entropy,
        gap: base.gap,
        degeneracy: base.degeneracy,
        energy_change: de,
        entropy_change: ds,
        converged: de < tol && ds < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fock_condensate_entropy;

    #[test]
    fn default_rule() {
        let p = ModelParams::<f64>::new(1.0, 0.5, 0.01).unwrap();
        assert_eq!(default_cutoff(&p).unwrap(), 30);
        let p = ModelParams::<f64>::new(1.0, 1.515, 0.01).unwrap();
        // ν*² = 25.25
        assert_eq!(default_cutoff(&p).unwrap(), 104);
    }

    #[test]
    fn normal_phase_vacuum() {
        let p = ModelParams::<f64>::new(1.0, 0.5, 0.01).unwrap();
        let g = analyze_ground(&p, CutoffChoice::Auto).unwrap();
        assert!(g.energy.abs() < 1e-12);
        assert!(g.entropy.abs() < 1e-10);
        assert!(g.converged);
    }

    #[test]
    fn condensate_entropy_matches_binomial() {
        let p = ModelParams::<f64>::new(1.0, 1.04, 0.01).unwrap();
        let g = analyze_ground(&p, CutoffChoice::Auto).unwrap();
        assert!((g.energy + 0.04).abs() < 1e-10);
        assert!((g.entropy - fock_condensate_entropy::<f64>(2)).abs() < 1e-10);
        assert_eq!(g.degeneracy, 1);
        assert!((g.gap.unwrap() - 0.01).abs() < 1e-10);
    }

    #[test]
    fn boundary_reports_multiplet() {
        let p = ModelParams::<f64>::new(1.0, 1.05, 0.01).unwrap();
        let g = analyze_ground(&p, CutoffChoice::Fixed(30)).unwrap();
        assert_eq!(g.degeneracy, 2);
        assert!((g.entropy - fock_condensate_entropy::<f64>(2)).abs() < 1e-10);
    }
}
