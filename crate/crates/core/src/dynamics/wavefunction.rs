use nalgebra::{Complex, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

use super::coefficients::EvolutionCoefficients;

/// Which coefficient set to use for the evolved position-space amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavefunctionConvention {
    /// Linear coefficient (h − ν′)/(f − f′) and cross term +f′/(f − f′).
    Printed,
    /// Solution of the annihilation constraints with α = (x_α + ∂_α)/√2:
    /// linear coefficient (h − ν′√2)/(f − f′) and cross term −f′/(f − f′).
    Consistent,
}

/// `Ψ(x_a, x_b) = exp[−L(x_a + x_b) − Q(x_a² + x_b²) + C x_a x_b]` up to
/// normalization, at forward time t.
///
/// The constraints fix the amplitude at time −t in terms of f(t), f′(t),
/// h(t); since f(−t) = f(t)*, f′(−t) = f′(t)* and h(−t) = h(t)*, the
/// forward-time amplitude uses the conjugated coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedWavefunction<T: Real> {
    pub convention: WavefunctionConvention,
    pub linear_coef: Complex<T>,
    pub quad_coef: Complex<T>,
    pub cross_coef: Complex<T>,
    /// |f − f′| fell below 1e−10.
    pub near_singular: bool,
}

pub fn evolved_wavefunction<T: Real>(
    coeffs: &EvolutionCoefficients<T>,
    nu_prime: T,
    convention: WavefunctionConvention,
) -> Result<EvolvedWavefunction<T>> {
    let f = coeffs.f.conj();
    let fp = coeffs.f_prime.conj();
    let h = coeffs.h.conj();
    let denom = f - fp;
    let near_singular = denom.norm_sqr().sqrt() < T::lit(1e-10);
    if denom.norm_sqr() == T::zero() {
        return Err(Error::NonNormalizable("f − f′ vanishes".into()));
    }
    let (shift, cross_sign) = match convention {
        WavefunctionConvention::Printed => (nu_prime, T::one()),
        WavefunctionConvention::Consistent => (nu_prime * T::lit(2.0).sqrt(), -T::one()),
    };
    let wf = EvolvedWavefunction {
        convention,
        linear_coef: (h - creal(shift)) / denom,
        quad_coef: f / denom * creal(T::lit(0.5)),
        cross_coef: fp / denom * creal(cross_sign),
        near_singular,
    };
    let (plus, minus) = wf.principal_real_parts();
    if plus <= T::zero() || minus <= T::zero() {
        return Err(Error::NonNormalizable(format!(
            "real parts of the quadratic form along x_a ± x_b are {plus:e}, {minus:e}"
        )));
    }
    Ok(wf)
}

impl<T: Real> EvolvedWavefunction<T> {
    pub fn eval(&self, xa: T, xb: T) -> Complex<T> {
        let exponent = -self.linear_coef * creal(xa + xb) - self.quad_coef * creal(xa * xa + xb * xb)
            + self.cross_coef * creal(xa * xb);
        let (s, c) = exponent.im.sin_cos();
        Complex::new(c, s) * creal(exponent.re.exp())
    }

    /// Re(2Q − C) and Re(2Q + C): decay rates along x_a + x_b and x_a − x_b.
    pub fn principal_real_parts(&self) -> (T, T) {
        let two_q = self.quad_coef.re * T::lit(2.0);
        (two_q - self.cross_coef.re, two_q + self.cross_coef.re)
    }

    fn precision(&self) -> Matrix2<T> {
        // |Ψ|² = exp(−½ xᵀ P x + jᵀ x)
        let q = self.quad_coef.re * T::lit(4.0);
        let c = -self.cross_coef.re * T::lit(2.0);
        Matrix2::new(q, c, c, q)
    }

    /// ⟨x_a⟩, ⟨x_b⟩ of the normalized |Ψ|².
    pub fn position_means(&self) -> Vector2<T> {
        let j = Vector2::repeat(-T::lit(2.0) * self.linear_coef.re);
        self.position_covariance() * j
    }

    /// Covariance of (x_a, x_b) under |Ψ|².
    pub fn position_covariance(&self) -> Matrix2<T> {
        self.precision().try_inverse().expect("normalizable form is invertible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use crate::dynamics::{covariance_from_coefficients, heisenberg_coefficients};
    use crate::mean_field::BogoliubovParams;

    fn bogo(theta: f64) -> BogoliubovParams<f64> {
        BogoliubovParams {
            theta,
            epsilon: 0.31379147742303104,
            zero_point: 0.0,
            a_coef: 1.0,
            b_coef: 0.0,
        }
    }

    #[test]
    fn product_gaussian_at_time_zero() {
        let c = heisenberg_coefficients(&bogo(-0.9), 2.0, 0.0);
        for conv in [WavefunctionConvention::Printed, WavefunctionConvention::Consistent] {
            let wf = evolved_wavefunction(&c, 0.4, conv).unwrap();
            assert!((wf.quad_coef - cplx(0.5, 0.0)).norm() < 1e-15);
            assert_eq!(wf.cross_coef.norm(), 0.0);
        }
    }

    #[test]
    fn cross_term_vanishes_without_squeezing() {
        for i in 0..30 {
            let c = heisenberg_coefficients(&bogo(0.0), 1.5, 0.4 * i as f64);
            let wf = evolved_wavefunction(&c, 0.3, WavefunctionConvention::Consistent).unwrap();
            assert!(wf.cross_coef.norm() < 1e-15);
        }
    }

    #[test]
    fn consistent_convention_reproduces_gaussian_moments() {
        let b = bogo(-0.9137811422086126);
        let nu = 2.179976222307879;
        for i in 1..40 {
            let c = heisenberg_coefficients(&b, nu, 0.5 * i as f64);
            let g = covariance_from_coefficients(&c, 0.3).unwrap();
            let wf = evolved_wavefunction(&c, 0.3, WavefunctionConvention::Consistent).unwrap();
            let cov = wf.position_covariance();
            assert!((cov[(0, 0)] - g.covariance[(0, 0)]).abs() < 1e-10);
            assert!((cov[(0, 1)] - g.covariance[(0, 2)]).abs() < 1e-10);
            let m = wf.position_means();
            assert!((m[0] - g.mean[0]).abs() < 1e-10 && (m[1] - g.mean[2]).abs() < 1e-10);
            // the printed form is also normalizable but mirrors the cross correlation
            let printed = evolved_wavefunction(&c, 0.3, WavefunctionConvention::Printed).unwrap();
            assert!((printed.position_covariance()[(0, 1)] + g.covariance[(0, 2)]).abs() < 1e-10);
        }
    }
}
