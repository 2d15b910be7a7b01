//! Hermitian eigensolvers: dense decomposition per connected block, with a
//! restarted Lanczos iteration for blocks above the dense limit.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use super::sparse::TwoModeOperator;
use super::state::PureState;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Blocks up to this dimension are diagonalized densely.
    pub dense_limit: usize,
    /// Required eigen-residual `‖Hv − Ev‖`, relative to `max(1, |E|max)`.
    pub residual_tol: f64,
    /// Levels closer than this (relative to `max(1, |E0|)`) are degenerate.
    pub degeneracy_tol: f64,
    /// Maximum Krylov dimension before a Lanczos restart.
    pub krylov_dim: usize,
    pub max_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_limit: 4000,
            residual_tol: 1e-10,
            degeneracy_tol: 1e-9,
            krylov_dim: 80,
            max_restarts: 200,
        }
    }
}

/// Ascending eigenvalues with eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct DenseEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<Complex<T>>,
}

/// Dense Hermitian eigen-decomposition, sorted ascending. Purely real input
/// takes the real symmetric path.
pub fn hermitian_eigen<T: Real>(m: &DMatrix<Complex<T>>) -> Result<DenseEigen<T>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(DenseEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let (values, vectors) = if m.iter().all(|z| z.im == T::zero()) {
        let eig = SymmetricEigen::try_new(m.map(|z| z.re), T::default_epsilon(), 0)
            .ok_or_else(|| Error::NoConvergence(format!("dense symmetric solve, dim {n}")))?;
        (eig.eigenvalues, eig.eigenvectors.map(creal))
    } else {
        let eig = SymmetricEigen::try_new(m.clone(), T::default_epsilon(), 0)
            .ok_or_else(|| Error::NoConvergence(format!("dense Hermitian solve, dim {n}")))?;
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(DenseEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: sorted_vectors,
    })
}

/// Fixed, input-independent start vector with generic overlap on every basis
/// state.
pub(crate) fn deterministic_start<T: Real>(dim: usize) -> DVector<Complex<T>> {
    let v = DVector::from_fn(dim, |i, _| {
        let x = (i as f64 * 0.618_033_988_749_895).fract();
        creal(T::lit(0.5 + x))
    });
    let norm = v.norm();
    v / creal(norm)
}

/// Lowest `count` eigenpairs of a Hermitian operator given only by its action.
///
/// Restarted Lanczos with full reorthogonalization. If the start vector
/// spans an invariant subspace smaller than `count`, fewer pairs are
/// returned.
pub fn lanczos_lowest<T, F>(
    apply: F,
    dim: usize,
    count: usize,
    opts: &SolverOptions,
) -> Result<Vec<(T, DVector<Complex<T>>)>>
where
    T: Real,
    F: Fn(&DVector<Complex<T>>) -> DVector<Complex<T>>,
{
    let count = count.min(dim);
    if count == 0 {
        return Ok(Vec::new());
    }
    let m_max = opts.krylov_dim.max(2 * count + 10).min(dim);
    let tol = T::tol(opts.residual_tol);
    let mut start = deterministic_start::<T>(dim);

    for _ in 0..opts.max_restarts {
        let mut basis: Vec<DVector<Complex<T>>> = vec![start.clone()];
        let mut alpha: Vec<T> = Vec::new();
        let mut beta: Vec<T> = Vec::new();
        loop {
            let j = basis.len() - 1;
            let mut w = apply(&basis[j]);
            alpha.push(basis[j].dotc(&w).re);
            for _ in 0..2 {
                for v in &basis {
                    let c = v.dotc(&w);
                    w.axpy(-c, v, Complex::new(T::one(), T::zero()));
                }
            }
            let b = w.norm();
            let k = basis.len();
            let scale = alpha.iter().fold(T::one(), |m, &a| m.max(a.abs()));
            let exhausted = b <= T::tol(1e-14) * scale || k == m_max;
            if k >= count.min(m_max) && (exhausted || k.is_multiple_of(8)) {
                let ritz = tridiagonal_eigen(&alpha, &beta)?;
                let scale = ritz.0.iter().fold(T::one(), |m, &e| m.max(e.abs()));
                let wanted = count.min(k);
                let converged = (0..wanted).all(|i| b * ritz.1[(k - 1, i)].abs() <= tol * scale);
                if converged || exhausted {
                    let vectors: Vec<DVector<Complex<T>>> = (0..wanted)
                        .map(|i| {
                            let mut x = DVector::zeros(dim);
                            for (row, v) in basis.iter().enumerate() {
                                x.axpy(creal(ritz.1[(row, i)]), v, Complex::new(T::one(), T::zero()));
                            }
                            let n = x.norm();
                            x / creal(n)
                        })
                        .collect();
                    let pairs: Vec<(T, DVector<Complex<T>>)> =
                        ritz.0.iter().take(wanted).copied().zip(vectors).collect();
                    let true_ok = pairs.iter().all(|(e, x)| {
                        let r = apply(x) - x * creal(*e);
                        r.norm() <= tol * scale
                    });
                    if true_ok {
                        return Ok(pairs);
                    }
                    let mut next = DVector::zeros(dim);
                    for (_, x) in &pairs {
                        next += x;
                    }
                    let n = next.norm();
                    start = next / creal(n);
                    break;
                }
            }
            beta.push(b);
            basis.push(w / creal(b));
        }
    }
    Err(Error::NoConvergence(format!(
        "Lanczos, dim {dim}, {} restarts",
        opts.max_restarts
    )))
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix (ascending).
pub(crate) fn tridiagonal_eigen<T: Real>(alpha: &[T], beta: &[T]) -> Result<(Vec<T>, DMatrix<T>)> {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            T::zero()
        }
    });
    let eig = SymmetricEigen::try_new(t, T::default_epsilon(), 0)
        .ok_or_else(|| Error::NoConvergence("tridiagonal solve".into()))?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite"));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// One eigenpair of a two-mode operator.
#[derive(Debug, Clone)]
pub struct EigenPair<T: Real> {
    pub energy: T,
    pub state: PureState<T>,
}

/// Lowest eigenvalue together with its full degenerate multiplet.
#[derive(Debug, Clone)]
pub struct GroundState<T: Real> {
    pub energy: T,
    /// Orthonormal basis of the ground eigenspace (at least one vector).
    pub multiplet: Vec<PureState<T>>,
    /// Distance to the next distinct level, if the space has one.
    pub gap: Option<T>,
}

impl<T: Real> GroundState<T> {
    pub fn state(&self) -> &PureState<T> {
        &self.multiplet[0]
    }

    pub fn is_degenerate(&self) -> bool {
        self.multiplet.len() > 1
    }
}

struct BlockLevel<T: Real> {
    energy: T,
    block: usize,
    local: DVector<Complex<T>>,
}

fn block_levels<T: Real>(
    h: &TwoModeOperator<T>,
    blocks: &[Vec<usize>],
    per_block: usize,
    opts: &SolverOptions,
) -> Result<Vec<BlockLevel<T>>> {
    let mut levels = Vec::new();
    for (b, idx) in blocks.iter().enumerate() {
        let k = per_block.min(idx.len());
        if idx.len() <= opts.dense_limit {
            let m = h.dense_block(idx);
            let eig = hermitian_eigen(&m)?;
            let scale = eig.values.iter().fold(T::one(), |acc, &e| acc.max(e.abs()));
            for i in 0..k {
                let v = eig.vectors.column(i).into_owned();
                let r = (&m * &v - &v * creal(eig.values[i])).norm();
                if r > T::tol(opts.residual_tol) * scale {
                    return Err(Error::NoConvergence(format!(
                        "dense residual {:.3e} in block of dim {}",
                        r.to_f64_lossy(),
                        idx.len()
                    )));
                }
                levels.push(BlockLevel {
                    energy: eig.values[i],
                    block: b,
                    local: v,
                });
            }
        } else {
            let sub = h.restricted(idx);
            let pairs = lanczos_lowest(|v| sub.apply(v), idx.len(), k, opts)?;
            for (e, v) in pairs {
                levels.push(BlockLevel {
                    energy: e,
                    block: b,
                    local: v,
                });
            }
        }
    }
    levels.sort_by(|x, y| x.energy.partial_cmp(&y.energy).expect("finite"));
    Ok(levels)
}

fn embed<T: Real>(h: &TwoModeOperator<T>, idx: &[usize], local: &DVector<Complex<T>>) -> PureState<T> {
    let mut full = DVector::zeros(h.dim());
    for (k, &i) in idx.iter().enumerate() {
        full[i] = local[k];
    }
    PureState::from_normalized(h.cutoff(), full)
}

/// Lowest `count` eigenpairs, ascending.
pub fn lowest_levels<T: Real>(
    h: &TwoModeOperator<T>,
    count: usize,
    opts: &SolverOptions,
) -> Result<Vec<EigenPair<T>>> {
    h.ensure_hermitian(1e-12)?;
    let blocks = h.components();
    let levels = block_levels(h, &blocks, count, opts)?;
    Ok(levels
        .into_iter()
        .take(count)
        .map(|l| EigenPair {
            energy: l.energy,
            state: embed(h, &blocks[l.block], &l.local),
        })
        .collect())
}

/// Lowest `count` eigenvalues, ascending.
pub fn lowest_energies<T: Real>(h: &TwoModeOperator<T>, count: usize, opts: &SolverOptions) -> Result<Vec<T>> {
    h.ensure_hermitian(1e-12)?;
    let blocks = h.components();
    Ok(block_levels(h, &blocks, count, opts)?
        .into_iter()
        .take(count)
        .map(|l| l.energy)
        .collect())
}

/// Ground energy, degenerate ground multiplet and gap.
pub fn ground_state<T: Real>(h: &TwoModeOperator<T>) -> Result<GroundState<T>> {
    ground_state_with(h, &SolverOptions::default())
}

pub fn ground_state_with<T: Real>(h: &TwoModeOperator<T>, opts: &SolverOptions) -> Result<GroundState<T>> {
    h.ensure_hermitian(1e-12)?;
    let blocks = h.components();
    let mut per_block = 4;
    loop {
        let levels = block_levels(h, &blocks, per_block, opts)?;
        let e0 = levels[0].energy;
        let band = T::tol(opts.degeneracy_tol) * T::one().max(e0.abs());
        let multiplet: Vec<&BlockLevel<T>> = levels.iter().take_while(|l| l.energy - e0 <= band).collect();
        // a block whose every returned level sits in the multiplet may hide more
        let saturated = blocks.iter().enumerate().any(|(b, idx)| {
            idx.len() > per_block && multiplet.iter().filter(|l| l.block == b).count() >= per_block
        });
        if saturated {
            per_block *= 2;
            continue;
        }
        let gap = levels.get(multiplet.len()).map(|l| l.energy - e0);
        return Ok(GroundState {
            energy: e0,
            multiplet: multiplet
                .iter()
                .map(|l| embed(h, &blocks[l.block], &l.local))
                .collect(),
            gap,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder_operators, tensor, FockCutoff, ModeOperator};

    fn oscillator_pair(n_max: usize, omega: f64) -> TwoModeOperator<f64> {
        let c = FockCutoff::new(n_max);
        let l = ladder_operators::<f64>(c);
        let id = ModeOperator::identity(c);
        (tensor(&l.number, &id).unwrap() + tensor(&id, &l.number).unwrap()).scaled_real(omega)
    }

    #[test]
    fn free_oscillators_have_vacuum_ground_state() {
        let gs = ground_state(&oscillator_pair(5, 1.0)).unwrap();
        assert_eq!(gs.energy, 0.0);
        assert!((gs.state().amplitude(0, 0).norm() - 1.0).abs() < 1e-14);
        assert_eq!(gs.multiplet.len(), 1);
        assert!((gs.gap.unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_multiplet_is_reported_in_full() {
        // n_a + n_b − 1 squared has the one-photon pair as doubly degenerate ground space
        let c = FockCutoff::new(3);
        let n = oscillator_pair(3, 1.0);
        let shifted = &n - &TwoModeOperator::identity(c.into());
        let h = &shifted * &shifted;
        let gs = ground_state(&h).unwrap();
        assert_eq!(gs.multiplet.len(), 2);
        assert!(gs.energy.abs() < 1e-14);
        assert!((gs.gap.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_operator() {
        let c = FockCutoff::new(2);
        let l = ladder_operators::<f64>(c);
        let op = tensor(&l.annihilate, &ModeOperator::identity(c)).unwrap();
        assert!(matches!(ground_state(&op), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn lanczos_matches_dense_on_coupled_block() {
        // beam-splitter hopping plus Kerr term: one block per photon number
        let c = FockCutoff::new(12);
        let l = ladder_operators::<f64>(c);
        let hop = tensor(&l.create, &l.annihilate).unwrap();
        let n = oscillator_pair(12, 1.0);
        let h = &(&n - &(&hop + &hop.adjoint()).scaled_real(1.3)) + &(&n * &n).scaled_real(0.05);
        let dense = lowest_energies(&h, 6, &SolverOptions::default()).unwrap();
        let opts = SolverOptions {
            dense_limit: 3,
            ..SolverOptions::default()
        };
        let sparse = lowest_energies(&h, 6, &opts).unwrap();
        for (a, b) in dense.iter().zip(&sparse) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn lanczos_on_dense_random_like_matrix() {
        let dim = 150;
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            let x = ((i * 31 + j * 17) % 23) as f64 / 23.0 + ((j * 31 + i * 17) % 23) as f64 / 23.0;
            let diag = if i == j { i as f64 * 0.1 } else { 0.0 };
            creal(x * 0.05 + diag)
        });
        let exact = hermitian_eigen(&m).unwrap();
        let got = lanczos_lowest(|v| &m * v, dim, 3, &SolverOptions::default()).unwrap();
        for (i, (e, _)) in got.iter().enumerate() {
            assert!((e - exact.values[i]).abs() < 1e-9);
        }
    }
}
