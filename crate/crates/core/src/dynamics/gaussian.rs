use nalgebra::{DMatrix, Matrix2, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::fock::hermitian_eigen;
use crate::scalar::{cplx, creal, Real};

use super::coefficients::EvolutionCoefficients;

/// Two-mode Gaussian state over (x_a, p_a, x_b, p_b) with x = (a† + a)/√2,
/// p = i(a† − a)/√2; the vacuum has covariance I/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState<T: Real> {
    pub mean: Vector4<T>,
    pub covariance: Matrix4<T>,
}

/// Symplectic form ⊕ [[0, 1], [−1, 0]].
pub fn symplectic_form<T: Real>() -> Matrix4<T> {
    let mut o = Matrix4::zeros();
    for k in [0, 2] {
        o[(k, k + 1)] = T::one();
        o[(k + 1, k)] = -T::one();
    }
    o
}

/// Entropy (nats) of a single-mode Gaussian state with symplectic
/// eigenvalue μ ≥ ½.
/// Values below ½ from rounding are treated as ½.
pub fn mode_entropy<T: Real>(mu: T) -> T {
    let half = T::lit(0.5);
    let mu = mu.max(half);
    let plus = mu + half;
    let minus = mu - half;
    let xlnx = |x: T| if x > T::zero() { x * x.ln() } else { T::zero() };
    xlnx(plus) - xlnx(minus)
}

impl<T: Real> GaussianState<T> {
    pub fn vacuum() -> Self {
        Self {
            mean: Vector4::zeros(),
            covariance: Matrix4::identity() * T::lit(0.5),
        }
    }

    /// Covariance block of mode a (`0`) or b (`1`).
    pub fn mode_block(&self, mode: usize) -> Matrix2<T> {
        let k = 2 * mode;
        self.covariance.fixed_view::<2, 2>(k, k).into_owned()
    }

    /// Symplectic eigenvalues (ascending): the positive eigenvalues of the
    /// Hermitian matrix σ^{1/2} iΩ σ^{1/2}. Going through a Hermitian
    /// spectrum keeps full precision when both values coincide.
    pub fn symplectic_eigenvalues(&self) -> Result<(T, T)> {
        let eig = self.covariance.symmetric_eigen();
        let root = eig.eigenvectors
            * Matrix4::from_diagonal(&eig.eigenvalues.map(|x| x.max(T::zero()).sqrt()))
            * eig.eigenvectors.transpose();
        let omega = symplectic_form::<T>();
        let m = root * omega * root;
        let herm = DMatrix::from_fn(4, 4, |r, c| cplx(T::zero(), m[(r, c)]));
        let values = hermitian_eigen(&herm)?.values;
        Ok((values[2].min(values[3]), values[2].max(values[3])))
    }

    /// Smallest eigenvalue of σ + iΩ/2, non-negative for a physical state.
    pub fn uncertainty_margin(&self) -> Result<T> {
        let omega = symplectic_form::<T>();
        let m = DMatrix::from_fn(4, 4, |r, c| cplx(self.covariance[(r, c)], omega[(r, c)] / T::lit(2.0)));
        Ok(hermitian_eigen(&m)?.values[0])
    }

    /// Fails if the uncertainty relation is violated by more than 1e−9.
    pub fn check_uncertainty(&self) -> Result<()> {
        let margin = self.uncertainty_margin()?;
        if margin < -T::tol(1e-9) {
            return Err(Error::UncertaintyViolation(margin.to_f64_lossy()));
        }
        Ok(())
    }

    /// √det of the mode-a block.
    pub fn reduced_symplectic_eigenvalue(&self) -> T {
        self.mode_block(0).determinant().max(T::zero()).sqrt()
    }

    /// Entanglement entropy between a and b for a pure state.
    pub fn entanglement_entropy(&self) -> T {
        mode_entropy(self.reduced_symplectic_eigenvalue())
    }

    /// Tr ρ_a² = 1/(2μ).
    pub fn reduced_purity(&self) -> T {
        T::one() / (T::lit(2.0) * self.reduced_symplectic_eigenvalue())
    }
}

/// Real 2×2 map taking the initial (x_α, p_α) to their Heisenberg images
/// (without the constant shift h).
pub fn alpha_quadrature_map<T: Real>(coeffs: &EvolutionCoefficients<T>) -> Matrix2<T> {
    let s2 = T::lit(2.0).sqrt();
    let u = (coeffs.f + coeffs.f_prime) / creal(s2);
    let v = cplx(T::zero(), T::one()) * (coeffs.f - coeffs.f_prime) / creal(s2);
    Matrix2::new(u.re, v.re, u.im, v.im) * s2
}

/// Pure Gaussian state reached from |ν′, ν′⟩ at the time of `coeffs`.
///
/// The α mode evolves by the Heisenberg map; β starts in vacuum and only
/// rotates, so its covariance stays I/2 and its mean stays zero. The result
/// is expressed in the a, b quadratures.
pub fn covariance_from_coefficients<T: Real>(coeffs: &EvolutionCoefficients<T>, nu_prime: T) -> Result<GaussianState<T>> {
    let half = T::lit(0.5);
    let s2 = T::lit(2.0).sqrt();
    let m = alpha_quadrature_map(coeffs);
    let sigma_alpha = m * m.transpose() * half;
    let mean_alpha = (coeffs.f + coeffs.f_prime) * creal(nu_prime * s2) + coeffs.h;

    let mut rotated = Matrix4::zeros();
    rotated.fixed_view_mut::<2, 2>(0, 0).copy_from(&sigma_alpha);
    rotated[(2, 2)] = half;
    rotated[(3, 3)] = half;
    let mean_rot = Vector4::new(s2 * mean_alpha.re, s2 * mean_alpha.im, T::zero(), T::zero());

    // (x_a, p_a, x_b, p_b) = T (x_α, p_α, x_β, p_β), T = [[I, I], [I, −I]]/√2
    let r = T::one() / s2;
    let mut tr = Matrix4::zeros();
    for k in 0..2 {
        tr[(k, k)] = r;
        tr[(k, k + 2)] = r;
        tr[(k + 2, k)] = r;
        tr[(k + 2, k + 2)] = -r;
    }
    let mut covariance = tr * rotated * tr.transpose();
    covariance = (covariance + covariance.transpose()) * half;
    let state = GaussianState {
        mean: tr * mean_rot,
        covariance,
    };
    state.check_uncertainty()?;
    Ok(state)
}
