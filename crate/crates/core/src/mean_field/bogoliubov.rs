use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

use super::stationary::{Branch, CondensateSolution};

/// 2B/A above which the quadratic theory is flagged as strongly squeezed.
pub const SQUEEZING_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovParams<T: Real> {
    pub theta: T,
    pub epsilon: T,
    pub zero_point: T,
    /// A = λ/ν + 2gν², coefficient of α†α.
    pub a_coef: T,
    /// B = gν², coefficient of α†² and α².
    pub b_coef: T,
}

impl<T: Real> BogoliubovParams<T> {
    /// tanh 2θ = −2B/A.
    pub fn tanh_two_theta(&self) -> T {
        -T::lit(2.0) * self.b_coef / self.a_coef
    }
}

/// Diagonalizes H_α = A α†α + B(α†² + α²) as ε γ†γ + ε₀ with
/// γ = cosh θ α − sinh θ α†.
///
/// On the normal branch at λ = 0 the λ → 0 limit (A = ω − w + g, B = 0) is
/// returned. On the superfluid branch λ must be positive.
pub fn bogoliubov_params<T: Real>(params: &ModelParams<T>, solution: &CondensateSolution<T>) -> Result<BogoliubovParams<T>> {
    let two = T::lit(2.0);
    let nu = solution.nu;
    let (linear, b) = if params.lambda == T::zero() {
        match solution.branch {
            Branch::Superfluid => return Err(Error::SqueezingDivergence),
            Branch::Normal => (params.effective_detuning(), T::zero()),
        }
    } else {
        if nu <= T::zero() {
            return Err(Error::InvalidParams(format!("condensate amplitude must be > 0, got {nu}")));
        }
        (params.lambda / nu, params.g * nu * nu)
    };
    let a = linear + two * b;
    if linear <= T::zero() {
        return Err(Error::SqueezingDivergence);
    }
    // A² − 4B² = (λ/ν)(λ/ν + 4gν²) without cancellation
    let epsilon = (linear * (linear + two * two * b)).sqrt();
    let theta = (-two * b / a).atanh() / two;
    Ok(BogoliubovParams {
        theta,
        epsilon,
        zero_point: (epsilon - a) / two,
        a_coef: a,
        b_coef: b,
    })
}

/// Conditions under which dropping the cubic and quartic fluctuation terms
/// is expected to hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCouplingReport {
    /// g < λ.
    pub nonlinearity_below_field: bool,
    /// 2B/A below [`SQUEEZING_THRESHOLD`].
    pub squeezing_moderate: bool,
    pub squeezing_ratio: f64,
}

impl WeakCouplingReport {
    pub fn flagged(&self) -> bool {
        !(self.nonlinearity_below_field && self.squeezing_moderate)
    }
}

pub fn weak_coupling_report<T: Real>(params: &ModelParams<T>, bogo: &BogoliubovParams<T>) -> WeakCouplingReport {
    let ratio = (T::lit(2.0) * bogo.b_coef / bogo.a_coef).to_f64_lossy();
    WeakCouplingReport {
        nonlinearity_below_field: params.g < params.lambda,
        squeezing_moderate: ratio < SQUEEZING_THRESHOLD,
        squeezing_ratio: ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_field::stationary_amplitude;

    fn reference_point() -> ModelParams<f64> {
        ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap().with_lambda(0.11).unwrap()
    }

    #[test]
    fn reference_point_values() {
        let p = reference_point();
        let s = stationary_amplitude(&p).unwrap();
        let b = bogoliubov_params(&p, &s).unwrap();
        assert!((b.a_coef - 1.0009185319310927).abs() < 1e-12);
        assert!((b.b_coef - 0.4752296329827732).abs() < 1e-12);
        assert!((b.epsilon - 0.31379147742303104).abs() < 1e-12);
        assert!((b.theta + 0.9137811422086126).abs() < 1e-12);
        assert!((b.zero_point + 0.34356352725403083).abs() < 1e-12);
        let r = weak_coupling_report(&p, &b);
        assert!(r.nonlinearity_below_field && r.squeezing_moderate && !r.flagged());
    }

    #[test]
    fn identity_on_grid() {
        for w in [0.2, 0.9, 1.3, 2.0, 3.5] {
            for lambda in [0.01, 0.1, 0.7] {
                let p = ModelParams::<f64>::new(1.0, w, 0.05).unwrap().with_lambda(lambda).unwrap();
                let b = bogoliubov_params(&p, &stationary_amplitude(&p).unwrap()).unwrap();
                let lhs = b.epsilon.powi(2) + 4.0 * b.b_coef.powi(2);
                assert!((lhs - b.a_coef.powi(2)).abs() < 1e-12 * b.a_coef.powi(2));
                assert!(((2.0 * b.theta).tanh() - b.tanh_two_theta()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normal_limit_and_divergence() {
        let p = ModelParams::<f64>::new(1.0, 0.5, 0.01).unwrap();
        let b = bogoliubov_params(&p, &stationary_amplitude(&p).unwrap()).unwrap();
        assert!((b.epsilon - 0.51).abs() < 1e-15);
        assert_eq!(b.theta, 0.0);
        let small = p.with_lambda(1e-6).unwrap();
        let bs = bogoliubov_params(&small, &stationary_amplitude(&small).unwrap()).unwrap();
        assert!((bs.epsilon - 0.51).abs() < 1e-9);
        let sf = ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap();
        let err = bogoliubov_params(&sf, &stationary_amplitude(&sf).unwrap()).unwrap_err();
        assert_eq!(err, Error::SqueezingDivergence);
    }
}
