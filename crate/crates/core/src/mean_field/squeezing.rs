use nalgebra::{Complex, DMatrix, DVector};

use crate::error::Result;
use crate::fock::{hermitian_eigen, ladder_operators, FockCutoff, ModeOperator};
use crate::model::ModelParams;
use crate::scalar::{cplx, creal, Real};

use super::bogoliubov::BogoliubovParams;
use super::stationary::CondensateSolution;

/// (λ/ν)n + gν²(2n + α†² + α²) on a truncated α mode.
pub fn quadratic_alpha_hamiltonian<T: Real>(bogo: &BogoliubovParams<T>, cutoff: FockCutoff) -> ModeOperator<T> {
    pair_hamiltonian(bogo.a_coef, bogo.b_coef, cutoff)
}

/// A n + B(α†² + α²), filled entry by entry.
fn pair_hamiltonian<T: Real>(a: T, b: T, cutoff: FockCutoff) -> ModeOperator<T> {
    let dim = cutoff.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = creal(a * T::from_count(n));
        if n + 2 < dim {
            let x = creal(b * T::from_count((n + 1) * (n + 2)).sqrt());
            m[(n + 2, n)] = x;
            m[(n, n + 2)] = x;
        }
    }
    ModeOperator::from_matrix(cutoff, m).expect("square matrix of the cutoff dimension")
}

/// Same operator built from the model parameters and the condensate amplitude.
pub fn quadratic_alpha_hamiltonian_from<T: Real>(
    params: &ModelParams<T>,
    solution: &CondensateSolution<T>,
    cutoff: FockCutoff,
) -> ModeOperator<T> {
    let nu = solution.nu;
    let b = params.g * nu * nu;
    pair_hamiltonian(params.lambda / nu + T::lit(2.0) * b, b, cutoff)
}

/// `exp[θ/2 (α†² − α²)]|0⟩` from the closed-form even amplitudes
/// `tanhᵐθ √((2m)!) / (2ᵐ m! √cosh θ)`, renormalized on the cutoff.
pub fn squeezed_vacuum<T: Real>(theta: T, cutoff: FockCutoff) -> DVector<Complex<T>> {
    let t = theta.tanh();
    let mut v = DVector::zeros(cutoff.dim());
    let mut c = T::one() / theta.cosh().sqrt();
    v[0] = creal(c);
    let mut m = 0usize;
    while 2 * m + 2 <= cutoff.n_max() {
        // c_{2m+2} / c_{2m} = tanh θ √((2m+1)/(2m+2))
        c = c * t * (T::from_count(2 * m + 1) / T::from_count(2 * m + 2)).sqrt();
        m += 1;
        v[2 * m] = creal(c);
    }
    let norm = v.norm();
    v / creal(norm)
}

/// The same state by exponentiating the generator on the truncated space.
/// Only amplitudes well below the cutoff are reliable.
pub fn squeezed_by_exponential<T: Real>(theta: T, cutoff: FockCutoff) -> Result<DVector<Complex<T>>> {
    let l = ladder_operators::<T>(cutoff);
    // i·θ/2(α†² − α²) is Hermitian; exp(K) = exp(−i · iK)
    let gen = &(&l.create * &l.create) - &(&l.annihilate * &l.annihilate);
    let herm = gen.matrix().map(|z| z * cplx(T::zero(), theta / T::lit(2.0)));
    let eig = hermitian_eigen(&herm)?;
    let mut vac = DVector::zeros(cutoff.dim());
    vac[0] = creal(T::one());
    let mut coeff = eig.vectors.ad_mul(&vac);
    for (k, c) in coeff.iter_mut().enumerate() {
        let phi = eig.values[k];
        *c *= cplx(phi.cos(), -phi.sin());
    }
    Ok(&eig.vectors * coeff)
}

/// Smallest α cutoff keeping the squeezed-vacuum tail below 1e−16.
pub fn squeeze_cutoff<T: Real>(theta: T) -> usize {
    let t = theta.abs().tanh().to_f64_lossy();
    let tail = if t > 0.0 { (1e-16f64).ln() / t.ln() } else { 0.0 };
    (tail.ceil() as usize + 10).max(30)
}

/// Entanglement entropy (nats) between a and b of a squeezed α vacuum.
pub fn squeezed_ground_entropy<T: Real>(theta: T) -> T {
    let half = theta / T::lit(2.0);
    let c2 = half.cosh().powi(2);
    let s2 = half.sinh().powi(2);
    let xlnx = |x: T| if x > T::zero() { x * x.ln() } else { T::zero() };
    xlnx(c2) - xlnx(s2)
}

/// Expectations of the discarded cubic and quartic terms in `|G_α⟩|0_β⟩`,
/// next to the zero-point scale they are compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationDiagnostic<T: Real> {
    pub h3: T,
    pub h4: T,
    pub quadratic_scale: T,
}

impl<T: Real> FluctuationDiagnostic<T> {
    /// |⟨H₃⟩| + |⟨H₄⟩| relative to ε.
    pub fn relative_size(&self) -> T {
        (self.h3.abs() + self.h4.abs()) / self.quadratic_scale
    }
}

/// Evaluates H₃ = 2gν[(α† + α)n_β + α†n_α + n_α α] and
/// H₄ = g[α†²α² + β†²β² + 2n_β n_α] in the squeezed ground state.
pub fn fluctuation_diagnostic<T: Real>(
    params: &ModelParams<T>,
    solution: &CondensateSolution<T>,
    bogo: &BogoliubovParams<T>,
) -> FluctuationDiagnostic<T> {
    let cut = FockCutoff::new(squeeze_cutoff(bogo.theta));
    let psi = squeezed_vacuum(bogo.theta, cut);
    let l = ladder_operators::<T>(cut);
    // β is in vacuum, so every term carrying n_β or β² vanishes
    let cubic = &(&l.create * &l.number) + &(&l.number * &l.annihilate);
    let quartic = &(&l.create * &l.create) * &(&l.annihilate * &l.annihilate);
    let expect = |op: &ModeOperator<T>| psi.dotc(&op.apply(&psi)).re;
    let two = T::lit(2.0);
    FluctuationDiagnostic {
        h3: two * params.g * solution.nu * expect(&cubic),
        h4: params.g * expect(&quartic),
        quadratic_scale: bogo.epsilon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_field::{bogoliubov_params, stationary_amplitude};

    fn reference_point() -> (ModelParams<f64>, CondensateSolution<f64>, BogoliubovParams<f64>) {
        let p = ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap().with_lambda(0.11).unwrap();
        let s = stationary_amplitude(&p).unwrap();
        let b = bogoliubov_params(&p, &s).unwrap();
        (p, s, b)
    }

    #[test]
    fn entropy_formula_values() {
        assert_eq!(squeezed_ground_entropy(0.0f64), 0.0);
        for th in [0.1f64, 0.5, 1.3, 2.0] {
            assert!((squeezed_ground_entropy(th) - squeezed_ground_entropy(-th)).abs() < 1e-15);
        }
        assert!((squeezed_ground_entropy(-0.9137811422086126f64) - 0.5819929138242238).abs() < 1e-12);
        assert!(squeezed_ground_entropy(5.0f64) > squeezed_ground_entropy(2.0f64));
    }

    #[test]
    fn closed_form_matches_exponential_action() {
        let th = -0.6f64;
        let big = FockCutoff::new(200);
        let exact = squeezed_vacuum(th, big);
        let expo = squeezed_by_exponential(th, big).unwrap();
        for n in 0..60 {
            assert!((exact[n] - expo[n]).norm() < 1e-12, "n={n}");
        }
        // the opposite sign is a different state
        let other = squeezed_vacuum(-th, big);
        assert!(exact.dotc(&other).norm() < 0.9);
    }

    #[test]
    fn ed_ground_is_the_squeezed_vacuum() {
        let (_, _, b) = reference_point();
        let cut = FockCutoff::new(squeeze_cutoff(b.theta));
        let eig = quadratic_alpha_hamiltonian(&b, cut).eigen().unwrap();
        assert!((eig.values[0] - b.zero_point).abs() < 1e-8);
        assert!((eig.values[1] - eig.values[0] - b.epsilon).abs() < 1e-8);
        let ground = eig.vectors.column(0).into_owned();
        let fid = ground.dotc(&squeezed_vacuum(b.theta, cut)).norm_sqr();
        assert!(fid > 1.0 - 1e-8, "{fid}");
        let wrong = ground.dotc(&squeezed_vacuum(-b.theta, cut)).norm_sqr();
        assert!(wrong < 0.9);
    }

    #[test]
    fn two_constructions_of_the_operator_agree() {
        let (p, s, b) = reference_point();
        let cut = FockCutoff::new(20);
        let x = quadratic_alpha_hamiltonian(&b, cut);
        let y = quadratic_alpha_hamiltonian_from(&p, &s, cut);
        assert!((x.matrix() - y.matrix()).norm() < 1e-12);
    }

    #[test]
    fn fluctuation_terms_match_gaussian_moments() {
        let (p, s, b) = reference_point();
        let d = fluctuation_diagnostic(&p, &s, &b);
        assert!(d.h3.abs() < 1e-14);
        let (sh, ch) = (b.theta.sinh(), b.theta.cosh());
        let expected = p.g * (2.0 * sh.powi(4) + sh.powi(2) * ch.powi(2));
        assert!((d.h4 - expected).abs() < 1e-10);
        assert!(d.relative_size() > 0.0);
    }
}
