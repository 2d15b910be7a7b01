//! Level shifts by Löwdin partitioning.
//!
//! For a reference level (or a degenerate group) spanned by basis states P
//! the exact eigenvalue connected to it solves
//! `E = lowest eig[H_PP + H_PQ (E − H_QQ)⁻¹ H_QP]`. Iterating on the shift
//! `δ = E − E_ref` rather than on E keeps tiny shifts at full relative
//! precision, which dense diagonalization of the whole block cannot do.

use nalgebra::DMatrix;

use super::eigen::hermitian_eigen;
use super::sparse::TwoModeOperator;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Shift of the lowest eigenvalue connected to the basis states `p`
/// relative to `reference`.
pub fn partitioned_shift<T: Real>(h: &TwoModeOperator<T>, p: &[usize], reference: T) -> Result<T> {
    if p.is_empty() {
        return Err(Error::InvalidState("empty reference space".into()));
    }
    h.ensure_hermitian(1e-12)?;
    // the connected blocks touching P
    let mut idx: Vec<usize> = h
        .components()
        .into_iter()
        .filter(|comp| p.iter().any(|i| comp.binary_search(i).is_ok()))
        .flatten()
        .collect();
    idx.sort_unstable();
    let q: Vec<usize> = idx.iter().copied().filter(|i| !p.contains(i)).collect();
    let np = p.len();

    let mut h_pp = DMatrix::from_fn(np, np, |r, c| h.get(p[r], p[c]));
    for k in 0..np {
        h_pp[(k, k)] -= creal(reference);
    }
    if q.is_empty() {
        return Ok(hermitian_eigen(&h_pp)?.values[0]);
    }
    let h_qq = h.dense_block(&q);
    let eig = hermitian_eigen(&h_qq)?;
    // coupling projected on the Q eigenbasis: c[k, j] = ⟨q_k|H|p_j⟩
    let h_qp = DMatrix::from_fn(q.len(), np, |r, c| h.get(q[r], p[c]));
    let coup = eig.vectors.ad_mul(&h_qp);
    let offsets: Vec<T> = eig.values.iter().map(|&d| reference - d).collect();

    let mut delta = T::zero();
    for _ in 0..500 {
        let mut h_eff = h_pp.clone();
        for (k, &off) in offsets.iter().enumerate() {
            let denom = off + delta;
            if denom.abs() <= T::tol(1e-300) {
                return Err(Error::NoConvergence("reference level resonant with the complement".into()));
            }
            for r in 0..np {
                for c in 0..np {
                    h_eff[(r, c)] += coup[(k, r)].conj() * coup[(k, c)] / creal(denom);
                }
            }
        }
        let next = if np == 1 {
            h_eff[(0, 0)].re
        } else {
            hermitian_eigen(&h_eff)?.values[0]
        };
        let settled = (next - delta).abs() <= T::lit(4.0) * T::default_epsilon() * next.abs();
        delta = next;
        if settled || delta == T::zero() {
            return Ok(delta);
        }
    }
    Err(Error::NoConvergence("partitioned level shift".into()))
}

/// Convenience wrapper for a single basis state `|n_first, n_second⟩`.
pub fn level_shift<T: Real>(h: &TwoModeOperator<T>, n_first: usize, n_second: usize) -> Result<T> {
    let i = h.cutoff().index(n_first, n_second);
    let reference = h.get(i, i).re;
    partitioned_shift(h, &[i], reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ground_state, ladder_operators, kron, FockCutoff, ModeOperator};

    fn driven_oscillator(lambda: f64) -> TwoModeOperator<f64> {
        let cut = FockCutoff::new(40);
        let l = ladder_operators::<f64>(cut);
        let id = ModeOperator::identity(FockCutoff::new(0));
        let x = &l.create + &l.annihilate;
        let h = &l.number - &x.scaled(lambda);
        kron(&h, &id)
    }

    #[test]
    fn displaced_oscillator_shift_is_exact() {
        // n − λ(a + a†) has ground energy −λ²
        for lambda in [1e-4, 1e-2, 0.3] {
            let h = driven_oscillator(lambda);
            let s = level_shift(&h, 0, 0).unwrap();
            assert!((s + lambda * lambda).abs() < 1e-15 * lambda.powi(2).max(1e-300) * 10.0, "{s}");
        }
    }

    #[test]
    fn matches_dense_diagonalization() {
        let h = driven_oscillator(0.3);
        let e = ground_state(&h).unwrap().energy;
        assert!((level_shift(&h, 0, 0).unwrap() - e).abs() < 1e-12);
    }
}
