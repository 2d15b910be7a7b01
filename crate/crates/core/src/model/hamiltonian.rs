use crate::fock::{TwoModeCutoff, TwoModeOperator};
use crate::scalar::{creal, Real};

use super::params::ModelParams;

/// ω(n_a + n_b) − w(a†b + b†a) + g(n_a + n_b)² in the (a, b) basis.
pub fn build_hamiltonian_ab<T: Real>(params: &ModelParams<T>, cutoff: impl Into<TwoModeCutoff>) -> TwoModeOperator<T> {
    let c = cutoff.into();
    let mut triplets = Vec::new();
    for (i, n, m) in c.basis() {
        let total = T::from_count(n + m);
        triplets.push((i, i, creal(params.omega * total + params.g * total * total)));
        // a†b |n, m⟩ = √((n+1)m) |n+1, m−1⟩ and its adjoint
        if m > 0 && n < c.first.n_max() {
            let j = c.index(n + 1, m - 1);
            let v = creal(-params.w * T::from_count((n + 1) * m).sqrt());
            triplets.push((j, i, v));
            triplets.push((i, j, v));
        }
    }
    TwoModeOperator::from_triplets(c, triplets)
}

/// (ω − w)n_α + (ω + w)n_β + g(n_α + n_β)², diagonal in the (α, β) basis.
pub fn build_hamiltonian_alphabeta<T: Real>(
    params: &ModelParams<T>,
    cutoff: impl Into<TwoModeCutoff>,
) -> TwoModeOperator<T> {
    TwoModeOperator::from_diagonal(cutoff.into(), |n, m| {
        let (nf, mf) = (T::from_count(n), T::from_count(m));
        let total = nf + mf;
        params.detuning() * nf + (params.omega + params.w) * mf + params.g * total * total
    })
}

/// H_λ = H − λ(α† + α) in the (α, β) basis.
pub fn build_sbf_hamiltonian<T: Real>(params: &ModelParams<T>, cutoff: impl Into<TwoModeCutoff>) -> TwoModeOperator<T> {
    let c = cutoff.into();
    let base = build_hamiltonian_alphabeta(params, c);
    if params.lambda == T::zero() {
        return base;
    }
    let mut triplets = Vec::new();
    for (i, n, m) in c.basis() {
        if n < c.first.n_max() {
            let j = c.index(n + 1, m);
            let v = creal(-params.lambda * T::from_count(n + 1).sqrt());
            triplets.push((j, i, v));
            triplets.push((i, j, v));
        }
    }
    &base + &TwoModeOperator::from_triplets(c, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{lowest_energies, SolverOptions};

    fn params() -> ModelParams<f64> {
        ModelParams::<f64>::new(1.0, 1.04, 0.01).unwrap()
    }

    #[test]
    fn transfer_element_and_hermiticity() {
        let h = build_hamiltonian_ab(&params(), TwoModeCutoff::square(6));
        assert!((h.element((1, 0), (0, 1)).re + 1.04).abs() < 1e-15);
        assert!(h.hermiticity_deviation() <= 1e-12 * h.frobenius_norm());
    }

    #[test]
    fn zero_transfer_is_diagonal() {
        let p = ModelParams::<f64>::new(1.0, 0.0, 0.3).unwrap();
        let h = build_hamiltonian_ab(&p, TwoModeCutoff::square(5));
        for i in 0..h.dim() {
            assert!(h.row(i).iter().all(|&(c, _)| c == i));
        }
    }

    #[test]
    fn alphabeta_diagonal_values() {
        let p = params();
        let h = build_hamiltonian_alphabeta(&p, TwoModeCutoff::square(8));
        assert_eq!(h.nnz(), h.dim() - 1);
        for n in 0..=8 {
            let e = h.element((n, 0), (n, 0)).re;
            assert!((e - ((1.0 - 1.04) * n as f64 + 0.01 * (n * n) as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn sbf_couples_neighbouring_alpha_levels_only() {
        let p = params().with_lambda(0.05).unwrap();
        let c = TwoModeCutoff::square(5);
        let h = build_sbf_hamiltonian(&p, c);
        assert!((h.element((1, 0), (0, 0)).re + 0.05).abs() < 1e-15);
        for (i, n, m) in c.basis() {
            for &(j, _) in h.row(i) {
                let (k, l) = c.occupations(j);
                assert_eq!(l, m);
                assert!(k.abs_diff(n) <= 1);
            }
        }
        let zero = build_sbf_hamiltonian(&params(), c);
        assert_eq!(zero.to_dense(), build_hamiltonian_alphabeta(&params(), c).to_dense());
    }

    #[test]
    fn spectra_of_both_bases_agree() {
        let p = ModelParams::<f64>::new(1.0, 1.13, 0.02).unwrap();
        let opts = SolverOptions::default();
        let ab = lowest_energies(&build_hamiltonian_ab(&p, TwoModeCutoff::square(30)), 10, &opts).unwrap();
        let ag = lowest_energies(&build_hamiltonian_alphabeta(&p, TwoModeCutoff::square(30)), 10, &opts).unwrap();
        for (x, y) in ab.iter().zip(&ag) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }
}
