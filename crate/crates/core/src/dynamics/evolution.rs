use crate::error::{Error, Result};
use crate::mean_field::{bogoliubov_params, stationary_amplitude, BogoliubovParams, CondensateSolution};
use crate::model::ModelParams;
use crate::scalar::Real;

use super::coefficients::{heisenberg_coefficients, EvolutionCoefficients};
use super::gaussian::{covariance_from_coefficients, GaussianState};

/// Quadratic-theory evolution of |ν′, ν′⟩ for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics<T: Real> {
    pub params: ModelParams<T>,
    pub solution: CondensateSolution<T>,
    pub bogo: BogoliubovParams<T>,
}

impl<T: Real> Dynamics<T> {
    /// Needs λ > 0 so that the quasiparticle energy is finite and positive.
    pub fn new(params: &ModelParams<T>) -> Result<Self> {
        let params = params.validated()?;
        if params.lambda <= T::zero() {
            return Err(Error::InvalidParams(format!(
                "dynamics needs a positive field, got λ = {}",
                params.lambda
            )));
        }
        let solution = stationary_amplitude(&params)?;
        let bogo = bogoliubov_params(&params, &solution)?;
        Ok(Self { params, solution, bogo })
    }

    pub fn coefficients(&self, t: T) -> EvolutionCoefficients<T> {
        heisenberg_coefficients(&self.bogo, self.solution.nu, t)
    }

    pub fn state(&self, t: T) -> Result<GaussianState<T>> {
        covariance_from_coefficients(&self.coefficients(t), self.params.nu_prime)
    }

    /// Entanglement entropy between a and b, in nats.
    pub fn entropy(&self, t: T) -> Result<T> {
        Ok(self.state(t)?.entanglement_entropy())
    }

    /// π/ε, the period of S(t).
    pub fn period(&self) -> T {
        T::pi() / self.bogo.epsilon
    }
}

pub fn dynamical_entropy<T: Real>(params: &ModelParams<T>, t: T) -> Result<T> {
    Dynamics::new(params)?.entropy(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_point(nu_prime: f64) -> ModelParams<f64> {
        ModelParams::<f64>::new(1.0, 2.0, 0.1)
            .unwrap()
            .with_lambda(0.11)
            .unwrap()
            .with_nu_prime(nu_prime)
            .unwrap()
    }

    #[test]
    fn starts_unentangled() {
        assert!(dynamical_entropy(&reference_point(0.3), 0.0).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn periodic_with_half_the_quasiparticle_period() {
        let d = Dynamics::new(&reference_point(0.3)).unwrap();
        let p = d.period();
        assert!((p - std::f64::consts::PI / 0.31379147742303104).abs() < 1e-12);
        for i in 0..200 {
            let t = 2.0 * p * i as f64 / 199.0;
            assert!((d.entropy(t).unwrap() - d.entropy(t + p).unwrap()).abs() <= 1e-9);
        }
        assert!(d.entropy(0.5 * p).unwrap() > 0.5);
    }

    #[test]
    fn independent_of_initial_amplitude() {
        let a = Dynamics::new(&reference_point(0.5)).unwrap();
        let b = Dynamics::new(&reference_point(5.0)).unwrap();
        for i in 0..100 {
            let t = 0.3 * i as f64;
            assert_eq!(a.entropy(t).unwrap().to_bits(), b.entropy(t).unwrap().to_bits());
        }
    }

    #[test]
    fn rejects_zero_field() {
        let p = reference_point(0.3).with_lambda(0.0).unwrap();
        assert!(Dynamics::new(&p).is_err());
    }
}
