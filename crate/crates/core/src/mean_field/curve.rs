use crate::error::Result;
use crate::fock::{entanglement_entropy, FockCutoff, PureState};
use crate::model::{rotate_modes, ModelParams, Rotation};
use crate::scalar::{creal, Real};

use super::bogoliubov::{bogoliubov_params, BogoliubovParams};
use super::squeezing::{quadratic_alpha_hamiltonian, squeeze_cutoff, squeezed_ground_entropy, squeezed_vacuum};
use super::stationary::{stationary_amplitude, CondensateSolution};

/// One point of the entropy-versus-coupling curve.
#[derive(Debug, Clone)]
pub struct SbfPoint<T: Real> {
    pub ratio: T,
    pub params: ModelParams<T>,
    pub solution: CondensateSolution<T>,
    pub bogo: BogoliubovParams<T>,
    pub entropy: T,
}

/// Squeezed-ground-state entropy across the given transfer strengths.
pub fn sbf_entropy_curve<T: Real>(base: &ModelParams<T>, w_values: &[T]) -> Result<Vec<SbfPoint<T>>> {
    w_values
        .iter()
        .map(|&w| {
            let params = ModelParams { w, ..*base }.validated()?;
            let solution = stationary_amplitude(&params)?;
            let bogo = bogoliubov_params(&params, &solution)?;
            Ok(SbfPoint {
                ratio: params.critical_ratio(),
                entropy: squeezed_ground_entropy(bogo.theta),
                params,
                solution,
                bogo,
            })
        })
        .collect()
}

/// Exact diagonalization of the quadratic α Hamiltonian and the comparison
/// quantities derived from its ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCheck<T: Real> {
    pub n_max: usize,
    pub ground_energy: T,
    pub gap: T,
    /// |⟨ED ground|squeezed(+θ)⟩|².
    pub fidelity: T,
    /// |⟨ED ground|squeezed(−θ)⟩|².
    pub fidelity_flipped: T,
    /// a|b entanglement of the ED ground state with β in vacuum.
    pub entropy: T,
    /// Changes of energy, gap and entropy when the cutoff grows by 10.
    pub cutoff_change: T,
    pub converged: bool,
}

fn quadratic_at<T: Real>(bogo: &BogoliubovParams<T>, n_max: usize) -> Result<(T, T, T, T, T)> {
    let cut = FockCutoff::new(n_max);
    let eig = quadratic_alpha_hamiltonian(bogo, cut).eigen()?;
    let ground = eig.vectors.column(0).into_owned();
    let fid = ground.dotc(&squeezed_vacuum(bogo.theta, cut)).norm_sqr();
    let flipped = ground.dotc(&squeezed_vacuum(-bogo.theta, cut)).norm_sqr();
    let vac = nalgebra::DVector::from_element(1, creal(T::one()));
    let state = PureState::product(&ground, &vac)?;
    let entropy = entanglement_entropy(&rotate_modes(&state, Rotation::AlphaBetaToAb))?;
    Ok((eig.values[0], eig.values[1] - eig.values[0], fid, flipped, entropy))
}

/// ED cross-check of the Bogoliubov solution at the given α cutoff
/// (`None` picks one from the squeezing), rechecked at cutoff + 10.
pub fn quadratic_check<T: Real>(bogo: &BogoliubovParams<T>, n_max: Option<usize>) -> Result<QuadraticCheck<T>> {
    let n = n_max.unwrap_or_else(|| squeeze_cutoff(bogo.theta));
    let (e, gap, fidelity, fidelity_flipped, entropy) = quadratic_at(bogo, n)?;
    let (e2, gap2, _, _, s2) = quadratic_at(bogo, n + 10)?;
    let change = (e - e2).abs().max((gap - gap2).abs()).max((entropy - s2).abs());
    Ok(QuadraticCheck {
        n_max: n,
        ground_energy: e,
        gap,
        fidelity,
        fidelity_flipped,
        entropy,
        cutoff_change: change,
        converged: change < T::tol(1e-8),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point_ed_matches_formulas() {
        let p = ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap().with_lambda(0.11).unwrap();
        let b = bogoliubov_params(&p, &stationary_amplitude(&p).unwrap()).unwrap();
        let c = quadratic_check(&b, None).unwrap();
        assert!(c.converged);
        assert!((c.ground_energy - b.zero_point).abs() < 1e-8);
        assert!((c.gap - b.epsilon).abs() < 1e-8);
        assert!(c.fidelity > 1.0 - 1e-8);
        assert!(c.fidelity_flipped < 0.9);
        assert!((c.entropy - squeezed_ground_entropy(b.theta)).abs() < 1e-6);
    }

    #[test]
    fn curve_orders_by_field() {
        let base = ModelParams::<f64>::new(1.0, 1.0, 0.01).unwrap();
        let ws: Vec<f64> = (0..21).map(|i| 1.01 * (0.5 + 0.05 * i as f64)).collect();
        let weak = sbf_entropy_curve(&base.with_lambda(0.1).unwrap(), &ws).unwrap();
        let strong = sbf_entropy_curve(&base.with_lambda(0.3).unwrap(), &ws).unwrap();
        for (a, b) in weak.iter().zip(&strong) {
            assert!(a.entropy >= 0.0 && b.entropy >= 0.0);
            if a.params.effective_detuning() < 0.0 {
                assert!(a.entropy >= b.entropy);
            }
        }
        assert!(weak[0].entropy < 1e-3);
    }
}
