use nalgebra::Complex;

use crate::mean_field::BogoliubovParams;
use crate::scalar::{cplx, Real};

/// Heisenberg solution α(t) = f α + f′ α† + h of the quadratic theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionCoefficients<T: Real> {
    pub f: Complex<T>,
    pub f_prime: Complex<T>,
    pub h: Complex<T>,
    pub t: T,
    pub epsilon: T,
    pub theta: T,
}

impl<T: Real> EvolutionCoefficients<T> {
    /// |f|² − |f′|² − 1, zero for a canonical map.
    pub fn canonical_residual(&self) -> T {
        self.f.norm_sqr() - self.f_prime.norm_sqr() - T::one()
    }
}

/// f = cos εt − i cosh 2θ sin εt, f′ = i sinh 2θ sin εt,
/// h = ν − ν(cos εt − i e^{−2θ} sin εt).
pub fn heisenberg_coefficients<T: Real>(bogo: &BogoliubovParams<T>, nu: T, t: T) -> EvolutionCoefficients<T> {
    let two_theta = T::lit(2.0) * bogo.theta;
    let (s, c) = (bogo.epsilon * t).sin_cos();
    let f = cplx(c, -two_theta.cosh() * s);
    let f_prime = cplx(T::zero(), two_theta.sinh() * s);
    let h = cplx(nu - nu * c, nu * (-two_theta).exp() * s);
    EvolutionCoefficients {
        f,
        f_prime,
        h,
        t,
        epsilon: bogo.epsilon,
        theta: bogo.theta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bogo() -> BogoliubovParams<f64> {
        BogoliubovParams {
            theta: -0.9137811422086126,
            epsilon: 0.31379147742303104,
            zero_point: -0.34356352725403083,
            a_coef: 1.0009185319310927,
            b_coef: 0.4752296329827732,
        }
    }

    #[test]
    fn initial_and_half_period_values() {
        let b = bogo();
        let c0 = heisenberg_coefficients(&b, 2.18, 0.0);
        assert_eq!((c0.f, c0.f_prime, c0.h), (cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)));
        let half = heisenberg_coefficients(&b, 2.18, std::f64::consts::PI / b.epsilon);
        assert!((half.f - cplx(-1.0, 0.0)).norm() < 1e-14);
        assert!(half.f_prime.norm() < 1e-14);
        assert!((half.h - cplx(4.36, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn h_equals_nu_times_one_minus_f_minus_fprime() {
        let b = bogo();
        for i in 0..50 {
            let c = heisenberg_coefficients(&b, 2.18, 0.37 * i as f64);
            assert!((c.h - (cplx(1.0, 0.0) - c.f - c.f_prime) * 2.18).norm() < 1e-13);
        }
    }

    #[test]
    fn canonical_on_a_fine_grid() {
        let b = bogo();
        let t_max = 3.0 * std::f64::consts::PI / b.epsilon;
        for i in 0..1000 {
            let c = heisenberg_coefficients(&b, 2.18, t_max * i as f64 / 999.0);
            assert!(c.canonical_residual().abs() <= 1e-12);
        }
    }
}
