use crate::scalar::Real;

use super::bogoliubov::BogoliubovParams;
use super::stationary::CondensateSolution;

/// Position-space ground state
/// `Ψ_G = exp{−(e^{−2θ}/4)[(x_a + x_b) + 2ν]² − ¼(x_a − x_b)²}`
/// with x = (a† + a)/√2.
///
/// In this form the peak sits at x_a = x_b = −ν; the shift α → α + ν with
/// ν > 0 would put it at +√2ν along x_α, i.e. x_a = x_b = +ν. Second
/// moments and entanglement do not depend on that sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundWavefunction<T: Real> {
    pub theta: T,
    pub nu: T,
    /// 1/√(π e^θ), making ∫|Ψ|² dx_a dx_b = 1.
    pub normalization: T,
}

pub fn ground_wavefunction<T: Real>(solution: &CondensateSolution<T>, bogo: &BogoliubovParams<T>) -> GroundWavefunction<T> {
    GroundWavefunction {
        theta: bogo.theta,
        nu: solution.nu,
        normalization: T::one() / (T::pi() * bogo.theta.exp()).sqrt(),
    }
}

impl<T: Real> GroundWavefunction<T> {
    /// Unnormalized amplitude.
    pub fn eval(&self, xa: T, xb: T) -> T {
        let four = T::lit(4.0);
        let s = xa + xb + T::lit(2.0) * self.nu;
        let d = xa - xb;
        (-(-T::lit(2.0) * self.theta).exp() / four * s * s - d * d / four).exp()
    }

    pub fn eval_normalized(&self, xa: T, xb: T) -> T {
        self.normalization * self.eval(xa, xb)
    }

    pub fn peak(&self) -> (T, T) {
        (-self.nu, -self.nu)
    }

    /// Variances of x_α = (x_a + x_b)/√2 and x_β = (x_a − x_b)/√2.
    pub fn rotated_variances(&self) -> (T, T) {
        let half = T::lit(0.5);
        ((T::lit(2.0) * self.theta).exp() * half, half)
    }
}
