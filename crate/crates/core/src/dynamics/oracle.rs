use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::fock::{
    kron, ladder_operators, low_rank_schmidt_weights, schmidt_coefficients, single_mode_coherent, FockCutoff,
    ModeOperator, PureState, Propagator, SolverOptions, LOW_RANK_THRESHOLD,
};
use crate::mean_field::quadratic_alpha_hamiltonian;
use crate::model::{rotate_modes, ModelParams, Rotation};
use crate::scalar::{creal, shannon_nats, Real};

use super::evolution::Dynamics;

/// Levels this close to the α cutoff count as the truncation edge.
pub const EDGE_WIDTH: usize = 10;
/// Edge weight above which a sample is not considered converged.
pub const EDGE_TOLERANCE: f64 = 1e-12;

/// α cutoff that holds the evolved squeezed coherent state: its phase-space
/// excursion is bounded by |z|·e^{2|θ|} in amplitude plus seven standard
/// deviations along the stretched quadrature.
pub fn oracle_cutoff<T: Real>(dynamics: &Dynamics<T>) -> usize {
    let z = shifted_amplitude(dynamics).abs().to_f64_lossy();
    let stretch = (2.0 * dynamics.bogo.theta.abs().to_f64_lossy()).exp();
    let radius = 2f64.sqrt() * z * stretch.max(1.0) + 7.0 * stretch.max(1.0) / 2f64.sqrt();
    (radius * radius / 2.0).ceil() as usize + 20
}

/// Initial α amplitude in the frame centred on the condensate.
fn shifted_amplitude<T: Real>(dynamics: &Dynamics<T>) -> T {
    dynamics.params.nu_prime * T::lit(2.0).sqrt() - dynamics.solution.nu
}

/// One point of the Fock-space evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample<T: Real> {
    pub t: T,
    pub entropy: T,
    /// Tr ρ_a².
    pub purity: T,
    /// ⟨α⟩ in the laboratory frame.
    pub mean_alpha: Complex<T>,
    /// Weight outside the β vacuum, which should stay zero.
    pub beta_leakage: T,
    /// Weight in the top [`EDGE_WIDTH`] α levels.
    pub edge_weight: T,
}

impl<T: Real> OracleSample<T> {
    pub fn converged(&self) -> bool {
        self.edge_weight <= T::tol(EDGE_TOLERANCE)
    }
}

/// Independent check on the Gaussian route: the coherent state
/// |ν′√2 − ν⟩_α|0⟩_β propagated under H_α ⊗ 1 + 1 ⊗ (ω + w + g)n_β in a
/// truncated Fock space, rotated to (a, b) and partial-traced.
///
/// The state lives in the frame displaced by the condensate amplitude. That
/// displacement factorizes into equal local displacements of a and b, so the
/// entanglement is the same as in the laboratory frame.
pub struct FockDynamicsOracle<T: Real> {
    dynamics: Dynamics<T>,
    alpha_cutoff: FockCutoff,
    propagator: Propagator<T>,
    initial: PureState<T>,
}

impl<T: Real> FockDynamicsOracle<T> {
    /// `alpha_cutoff = None` picks [`oracle_cutoff`].
    pub fn new(params: &ModelParams<T>, alpha_cutoff: Option<usize>) -> Result<Self> {
        let dynamics = Dynamics::new(params)?;
        let n_alpha = alpha_cutoff.unwrap_or_else(|| oracle_cutoff(&dynamics));
        let alpha_cutoff = FockCutoff::new(n_alpha);
        let beta_cutoff = FockCutoff::new(1);

        let h_alpha = quadratic_alpha_hamiltonian(&dynamics.bogo, alpha_cutoff);
        let beta_freq = params.omega + params.w + params.g;
        let h_beta = ladder_operators::<T>(beta_cutoff).number.scaled(beta_freq);
        let h = &kron(&h_alpha, &ModeOperator::identity(beta_cutoff))
            + &kron(&ModeOperator::identity(alpha_cutoff), &h_beta);

        let (coherent, _) = single_mode_coherent(creal(shifted_amplitude(&dynamics)), alpha_cutoff)?;
        let mut vacuum = nalgebra::DVector::zeros(beta_cutoff.dim());
        vacuum[0] = creal(T::one());
        let initial = PureState::product(&coherent, &vacuum)?;
        let opts = SolverOptions {
            dense_limit: usize::MAX,
            ..SolverOptions::default()
        };
        Ok(Self {
            dynamics,
            alpha_cutoff,
            propagator: Propagator::with_options(h, opts)?,
            initial,
        })
    }

    pub fn alpha_cutoff(&self) -> FockCutoff {
        self.alpha_cutoff
    }

    pub fn dynamics(&self) -> &Dynamics<T> {
        &self.dynamics
    }

    /// State at time t in the (α, β) basis of the displaced frame.
    pub fn evolve(&self, t: T) -> Result<PureState<T>> {
        self.propagator.propagate(&self.initial, t)
    }

    pub fn sample(&self, t: T) -> Result<OracleSample<T>> {
        let psi = self.evolve(t)?;
        let n_max = self.alpha_cutoff.n_max();
        let edge_weight = psi.weight_where(|n, _| n + EDGE_WIDTH > n_max);
        let beta_leakage = psi.weight_where(|_, m| m > 0);

        let mut shifted = Complex::new(T::zero(), T::zero());
        for n in 0..n_max {
            for m in 0..psi.cutoff().second.dim() {
                shifted += psi.amplitude(n, m).conj() * psi.amplitude(n + 1, m) * creal(T::from_count(n + 1).sqrt());
            }
        }
        let mean_alpha = shifted + creal(self.dynamics.solution.nu);

        let lab = rotate_modes(&psi, Rotation::AlphaBetaToAb);
        let weights = schmidt_weights(&lab)?;
        let purity = weights.iter().fold(T::zero(), |acc, &w| acc + w * w);
        Ok(OracleSample {
            t,
            entropy: shannon_nats(weights.iter().copied()),
            purity,
            mean_alpha,
            beta_leakage,
            edge_weight,
        })
    }
}

fn schmidt_weights<T: Real>(state: &PureState<T>) -> Result<Vec<T>> {
    let c = state.cutoff();
    if c.first.dim().min(c.second.dim()) > LOW_RANK_THRESHOLD {
        low_rank_schmidt_weights(&state.amplitude_matrix(), 1e-12)
    } else {
        Ok(schmidt_coefficients(state).into_iter().map(|s| s * s).collect())
    }
}

/// Oracle entropy at one time; fails if the state reaches the cutoff edge.
pub fn fock_dynamics_oracle<T: Real>(params: &ModelParams<T>, alpha_cutoff: Option<usize>, t: T) -> Result<T> {
    let oracle = FockDynamicsOracle::new(params, alpha_cutoff)?;
    let s = oracle.sample(t)?;
    if !s.converged() {
        return Err(Error::NoConvergence(format!(
            "weight {:e} within {EDGE_WIDTH} levels of the α cutoff {}",
            s.edge_weight.to_f64_lossy(),
            oracle.alpha_cutoff.n_max()
        )));
    }
    Ok(s.entropy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ModelParams<f64> {
        // mild squeezing keeps the cutoff small
        ModelParams::<f64>::new(1.0, 2.0, 0.1)
            .unwrap()
            .with_lambda(2.0)
            .unwrap()
            .with_nu_prime(0.3)
            .unwrap()
    }

    #[test]
    fn zero_at_time_zero() {
        assert!(fock_dynamics_oracle(&small(), None, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn matches_gaussian_route_with_mild_squeezing() {
        let oracle = FockDynamicsOracle::new(&small(), None).unwrap();
        let d = oracle.dynamics().clone();
        for k in 1..6 {
            let t = 0.4 * k as f64 / d.bogo.epsilon;
            let s = oracle.sample(t).unwrap();
            assert!(s.converged());
            assert!(s.beta_leakage < 1e-28);
            assert!((s.entropy - d.entropy(t).unwrap()).abs() < 1e-8, "{} {}", s.entropy, d.entropy(t).unwrap());
            let g = d.state(t).unwrap();
            let purity = g.reduced_purity();
            assert!((s.purity - purity).abs() < 1e-8);
            // lab-frame ⟨α⟩ from the Heisenberg map
            let c = d.coefficients(t);
            let expected = (c.f + c.f_prime) * (0.3 * 2f64.sqrt()) + c.h;
            assert!((s.mean_alpha - expected).norm() < 1e-8);
        }
    }
}
