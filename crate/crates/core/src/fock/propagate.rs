use std::sync::OnceLock;

use nalgebra::{Complex, DVector};

use super::eigen::{hermitian_eigen, tridiagonal_eigen, DenseEigen, SolverOptions};
use super::sparse::{SparseBlock, TwoModeOperator};
use super::state::PureState;
use crate::error::{Error, Result};
use crate::scalar::{creal, phase_factor, Real};

enum Block<T: Real> {
    Dense(OnceLock<DenseEigen<T>>),
    Sparse(SparseBlock<T>),
}

/// Time evolution `e^{−iHt}` for a fixed Hermitian operator.
///
/// The operator is split into its connected blocks. Blocks up to the dense
/// limit are diagonalized the first time a state with weight on them is
/// propagated; larger blocks use a short-step Krylov exponential.
pub struct Propagator<T: Real> {
    h: TwoModeOperator<T>,
    blocks: Vec<Vec<usize>>,
    spectra: Vec<Block<T>>,
    opts: SolverOptions,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: TwoModeOperator<T>) -> Result<Self> {
        Self::with_options(h, SolverOptions::default())
    }

    pub fn with_options(h: TwoModeOperator<T>, opts: SolverOptions) -> Result<Self> {
        h.ensure_hermitian(1e-12)?;
        let blocks = h.components();
        let spectra = blocks
            .iter()
            .map(|idx| {
                if idx.len() <= opts.dense_limit {
                    Block::Dense(OnceLock::new())
                } else {
                    Block::Sparse(h.restricted(idx))
                }
            })
            .collect();
        Ok(Self {
            h,
            blocks,
            spectra,
            opts,
        })
    }

    pub fn hamiltonian(&self) -> &TwoModeOperator<T> {
        &self.h
    }

    fn spectrum(&self, b: usize) -> Result<Option<&DenseEigen<T>>> {
        match &self.spectra[b] {
            Block::Sparse(_) => Ok(None),
            Block::Dense(cell) => {
                if cell.get().is_none() {
                    let eig = hermitian_eigen(&self.h.dense_block(&self.blocks[b]))?;
                    let _ = cell.set(eig);
                }
                Ok(cell.get())
            }
        }
    }

    /// `e^{−iHt}|ψ⟩`.
    pub fn propagate(&self, psi: &PureState<T>, t: T) -> Result<PureState<T>> {
        if psi.cutoff() != self.h.cutoff() {
            return Err(Error::DimensionMismatch {
                left: psi.cutoff().dim(),
                right: self.h.dim(),
            });
        }
        let amps = psi.amplitudes();
        let mut out = DVector::zeros(amps.len());
        for (b, idx) in self.blocks.iter().enumerate() {
            let local = DVector::from_iterator(idx.len(), idx.iter().map(|&i| amps[i]));
            if local.iter().all(|z| z.norm_sqr() == T::zero()) {
                continue;
            }
            let evolved = match self.spectrum(b)? {
                Some(eig) => {
                    let mut coeff = eig.vectors.ad_mul(&local);
                    for (k, c) in coeff.iter_mut().enumerate() {
                        *c *= phase_factor(eig.values[k] * t);
                    }
                    &eig.vectors * coeff
                }
                None => match &self.spectra[b] {
                    Block::Sparse(sub) => krylov_evolve(|v| sub.apply(v), &local, t, &self.opts)?,
                    Block::Dense(_) => unreachable!(),
                },
            };
            for (k, &i) in idx.iter().enumerate() {
                out[i] = evolved[k];
            }
        }
        PureState::new(psi.cutoff(), out)
    }
}

/// One-shot `e^{−iHt}|ψ⟩`.
pub fn propagate<T: Real>(h: &TwoModeOperator<T>, psi: &PureState<T>, t: T) -> Result<PureState<T>> {
    Propagator::new(h.clone())?.propagate(psi, t)
}

/// Krylov approximation of `e^{−iHt}v`, subdividing `t` until the a-posteriori
/// error estimate of each step is below the residual tolerance.
pub fn krylov_evolve<T, F>(apply: F, v: &DVector<Complex<T>>, t: T, opts: &SolverOptions) -> Result<DVector<Complex<T>>>
where
    T: Real,
    F: Fn(&DVector<Complex<T>>) -> DVector<Complex<T>>,
{
    let m_max = 40.min(v.len()).max(1);
    let tol = T::tol(opts.residual_tol);
    let norm0 = v.norm();
    let mut state = v / creal(norm0);
    let mut remaining = t;
    let mut dt = t;
    let mut iterations = 0usize;
    while remaining.abs() > T::zero() {
        iterations += 1;
        if iterations > 100_000 {
            return Err(Error::NoConvergence("Krylov time stepping".into()));
        }
        if dt.abs() > remaining.abs() {
            dt = remaining;
        }
        // Lanczos basis
        let mut basis = vec![state.clone()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut tail = T::zero();
        for j in 0..m_max {
            let mut w = apply(&basis[j]);
            alpha.push(basis[j].dotc(&w).re);
            for _ in 0..2 {
                for q in &basis {
                    let c = q.dotc(&w);
                    w.axpy(-c, q, creal(T::one()));
                }
            }
            let b = w.norm();
            if j + 1 == m_max || b <= T::tol(1e-14) {
                tail = if j + 1 == m_max { b } else { T::zero() };
                break;
            }
            beta.push(b);
            basis.push(w / creal(b));
        }
        let (vals, vecs) = tridiagonal_eigen(&alpha, &beta)?;
        let k = alpha.len();
        let coeffs = |step: T| {
            DVector::from_fn(k, |r, _| {
                (0..k).fold(Complex::new(T::zero(), T::zero()), |acc, c| {
                    acc + creal(vecs[(r, c)] * vecs[(0, c)]) * phase_factor(vals[c] * step)
                })
            })
        };
        let y = coeffs(dt);
        let err = tail * y[k - 1].norm_sqr().sqrt();
        if err > tol && k == m_max {
            dt /= T::lit(2.0);
            continue;
        }
        let mut next = DVector::zeros(state.len());
        for (j, q) in basis.iter().take(k).enumerate() {
            next.axpy(y[j], q, creal(T::one()));
        }
        state = next;
        remaining -= dt;
    }
    Ok(state * creal(norm0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::cutoff::TwoModeCutoff;
    use crate::fock::operator::ladder_operators;
    use crate::fock::sparse::kron;
    use crate::fock::operator::ModeOperator;
    use crate::fock::cutoff::FockCutoff;
    use crate::scalar::cplx;

    fn hopping(n: usize) -> TwoModeOperator<f64> {
        let l = ladder_operators::<f64>(FockCutoff::new(n));
        let id = ModeOperator::identity(FockCutoff::new(n));
        let nn = &kron(&l.number, &id) + &kron(&id, &l.number);
        let hop = &kron(&l.create, &l.annihilate) + &kron(&l.annihilate, &l.create);
        &nn - &hop.scaled_real(0.7)
    }

    #[test]
    fn single_photon_oscillates_between_modes() {
        let h = hopping(3);
        let psi = PureState::basis(TwoModeCutoff::square(3), 1, 0);
        let p = Propagator::new(h).unwrap();
        let t = 0.9;
        let out = p.propagate(&psi, t).unwrap();
        // exact: cos(wt)|1,0⟩ + i sin(wt)|0,1⟩ up to global e^{-it}
        let expected_a = (0.7f64 * t).cos().powi(2);
        assert!((out.amplitude(1, 0).norm_sqr() - expected_a).abs() < 1e-13);
        let phase = cplx(0.0f64, 1.0) * phase_factor(t);
        assert!((out.amplitude(0, 1) - phase * (0.7f64 * t).sin()).norm() < 1e-13);
    }

    #[test]
    fn krylov_matches_dense() {
        let h = hopping(6);
        let psi = PureState::basis(TwoModeCutoff::square(6), 4, 2);
        let dense = Propagator::new(h.clone()).unwrap().propagate(&psi, 2.3).unwrap();
        let opts = SolverOptions {
            dense_limit: 2,
            ..SolverOptions::default()
        };
        let sparse = Propagator::with_options(h, opts).unwrap().propagate(&psi, 2.3).unwrap();
        assert!((dense.fidelity(&sparse) - 1.0).abs() < 1e-11);
        assert!((dense.amplitudes() - sparse.amplitudes()).norm() < 1e-9);
    }
}
