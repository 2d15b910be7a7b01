use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use super::cutoff::TwoModeCutoff;
use super::operator::ModeOperator;
use super::state::PureState;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Sparse complex operator on a truncated two-mode Fock space.
///
/// Rows are stored as column-sorted `(column, value)` lists with no explicit
/// zeros. Arithmetic operators panic on mismatched cutoffs, like dense
/// matrix arithmetic does.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOperator<T: Real> {
    cutoff: TwoModeCutoff,
    rows: Vec<Vec<(usize, Complex<T>)>>,
}

impl<T: Real> TwoModeOperator<T> {
    pub fn zeros(cutoff: TwoModeCutoff) -> Self {
        Self {
            cutoff,
            rows: vec![Vec::new(); cutoff.dim()],
        }
    }

    pub fn identity(cutoff: TwoModeCutoff) -> Self {
        Self::from_diagonal(cutoff, |_, _| T::one())
    }

    /// Diagonal operator with entries `f(n_first, n_second)`.
    pub fn from_diagonal(cutoff: TwoModeCutoff, f: impl Fn(usize, usize) -> T) -> Self {
        Self::from_triplets(cutoff, cutoff.basis().map(|(i, n, m)| (i, i, creal(f(n, m)))))
    }

    /// Builds from `(row, column, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        cutoff: TwoModeCutoff,
        triplets: impl IntoIterator<Item = (usize, usize, Complex<T>)>,
    ) -> Self {
        let dim = cutoff.dim();
        let mut rows: Vec<Vec<(usize, Complex<T>)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            rows[r].push((c, v));
        }
        for row in &mut rows {
            compact(row);
        }
        Self { cutoff, rows }
    }

    pub fn cutoff(&self) -> TwoModeCutoff {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Complex<T>)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|k| self.rows[i][k].1)
            .unwrap_or_else(|_| Complex::new(T::zero(), T::zero()))
    }

    /// `⟨n'_1, n'_2| O |n_1, n_2⟩` by occupation numbers.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> Complex<T> {
        self.get(self.cutoff.index(bra.0, bra.1), self.cutoff.index(ket.0, ket.1))
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (c, r, v.conj())));
        Self::from_triplets(self.cutoff, triplets)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for entry in row.iter_mut() {
                entry.1 *= factor;
            }
            row.retain(|e| e.1 != Complex::new(T::zero(), T::zero()));
        }
        out
    }

    pub fn scaled_real(&self, factor: T) -> Self {
        self.scaled(creal(factor))
    }

    pub fn apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        assert_eq!(v.len(), self.dim(), "vector length does not match operator");
        DVector::from_iterator(
            self.dim(),
            self.rows
                .iter()
                .map(|row| row.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(c, x)| acc + x * v[c])),
        )
    }

    pub fn apply_state(&self, psi: &PureState<T>) -> DVector<Complex<T>> {
        assert_eq!(psi.cutoff(), self.cutoff, "state and operator cutoffs differ");
        self.apply(psi.amplitudes())
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, psi: &PureState<T>) -> Complex<T> {
        psi.amplitudes().dotc(&self.apply_state(psi))
    }

    pub fn frobenius_norm(&self) -> T {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |acc, &(_, v)| acc + v.norm_sqr())
            .sqrt()
    }

    /// `‖O − O†‖_F / ‖O‖_F`, zero for the zero operator.
    pub fn hermiticity_deviation(&self) -> T {
        let norm = self.frobenius_norm();
        if norm == T::zero() {
            return T::zero();
        }
        let mut dev = T::zero();
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                dev += (v - self.get(c, r).conj()).norm_sqr();
            }
        }
        // entries whose transpose partner is structurally absent
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, _) in row {
                if self.rows[c].binary_search_by_key(&r, |&(cc, _)| cc).is_err() {
                    dev += self.get(r, c).norm_sqr();
                }
            }
        }
        dev.sqrt() / norm
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > T::tol(tol) {
            Err(Error::NotHermitian {
                deviation: dev.to_f64_lossy(),
            })
        } else {
            Ok(())
        }
    }

    /// Connected components of the sparsity graph, each sorted ascending and
    /// ordered by their smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let dim = self.dim();
        let mut parent: Vec<usize> = (0..dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, _) in row {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
        let mut label = vec![usize::MAX; dim];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..dim {
            let root = find(&mut parent, i);
            if label[root] == usize::MAX {
                label[root] = out.len();
                out.push(Vec::new());
            }
            out[label[root]].push(i);
        }
        out
    }

    /// Dense restriction to the given (sorted) index set.
    pub fn dense_block(&self, indices: &[usize]) -> DMatrix<Complex<T>> {
        let mut local = vec![usize::MAX; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            local[i] = k;
        }
        let mut m = DMatrix::zeros(indices.len(), indices.len());
        for (k, &i) in indices.iter().enumerate() {
            for &(c, v) in &self.rows[i] {
                if local[c] != usize::MAX {
                    m[(k, local[c])] = v;
                }
            }
        }
        m
    }

    /// Sparse restriction to the given (sorted) index set, in local indices.
    pub fn restricted(&self, indices: &[usize]) -> SparseBlock<T> {
        let mut local = vec![usize::MAX; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            local[i] = k;
        }
        SparseBlock {
            rows: indices
                .iter()
                .map(|&i| {
                    self.rows[i]
                        .iter()
                        .filter(|(c, _)| local[*c] != usize::MAX)
                        .map(|&(c, v)| (local[c], v))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.dense_block(&all)
    }

    fn zip_with(&self, other: &Self, sign: T) -> Self {
        assert_eq!(self.cutoff, other.cutoff, "operator cutoffs differ");
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
            .chain(
                other
                    .rows
                    .iter()
                    .enumerate()
                    .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v * sign))),
            );
        Self::from_triplets(self.cutoff, triplets)
    }
}

/// Row-list matrix over a local index set, used for matrix-free solvers.
#[derive(Debug, Clone)]
pub struct SparseBlock<T: Real> {
    rows: Vec<Vec<(usize, Complex<T>)>>,
}

impl<T: Real> SparseBlock<T> {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        DVector::from_iterator(
            self.rows.len(),
            self.rows
                .iter()
                .map(|row| row.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(c, x)| acc + x * v[c])),
        )
    }
}

/// Sorts a row by column, sums duplicates and drops exact zeros.
fn compact<T: Real>(row: &mut Vec<(usize, Complex<T>)>) {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, Complex<T>)> = Vec::with_capacity(row.len());
    for &(c, v) in row.iter() {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != Complex::new(T::zero(), T::zero()));
    *row = out;
}

/// Kronecker product `op_first ⊗ op_second` for any pair of dimensions.
pub fn kron<T: Real>(op_first: &ModeOperator<T>, op_second: &ModeOperator<T>) -> TwoModeOperator<T> {
    let cutoff = TwoModeCutoff::new(op_first.cutoff(), op_second.cutoff());
    let (a, b) = (op_first.matrix(), op_second.matrix());
    let zero = Complex::new(T::zero(), T::zero());
    let mut triplets = Vec::new();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let x = a[(i, j)];
            if x == zero {
                continue;
            }
            for k in 0..b.nrows() {
                for l in 0..b.ncols() {
                    let y = b[(k, l)];
                    if y != zero {
                        triplets.push((cutoff.index(i, k), cutoff.index(j, l), x * y));
                    }
                }
            }
        }
    }
    TwoModeOperator::from_triplets(cutoff, triplets)
}

/// Kronecker product of two single-mode operators on the square two-mode
/// space; both factors must share the same cutoff.
pub fn tensor<T: Real>(op_a: &ModeOperator<T>, op_b: &ModeOperator<T>) -> Result<TwoModeOperator<T>> {
    if op_a.dim() != op_b.dim() {
        return Err(Error::DimensionMismatch {
            left: op_a.dim(),
            right: op_b.dim(),
        });
    }
    Ok(kron(op_a, op_b))
}

impl<'a, T: Real> Add<&'a TwoModeOperator<T>> for &'a TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn add(self, rhs: &'a TwoModeOperator<T>) -> TwoModeOperator<T> {
        self.zip_with(rhs, T::one())
    }
}

impl<'a, T: Real> Sub<&'a TwoModeOperator<T>> for &'a TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn sub(self, rhs: &'a TwoModeOperator<T>) -> TwoModeOperator<T> {
        self.zip_with(rhs, -T::one())
    }
}

impl<T: Real> Add for TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Real> Sub for TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Real> Neg for TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn neg(self) -> Self {
        self.scaled_real(-T::one())
    }
}

impl<'a, T: Real> Mul<&'a TwoModeOperator<T>> for &'a TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn mul(self, rhs: &'a TwoModeOperator<T>) -> TwoModeOperator<T> {
        assert_eq!(self.cutoff, rhs.cutoff, "operator cutoffs differ");
        let triplets = self.rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter().flat_map(move |&(k, x)| rhs.rows[k].iter().map(move |&(c, y)| (r, c, x * y)))
        });
        TwoModeOperator::from_triplets(self.cutoff, triplets)
    }
}

impl<T: Real> Mul for TwoModeOperator<T> {
    type Output = TwoModeOperator<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder_operators, FockCutoff};

    fn n_total(cutoff: FockCutoff) -> TwoModeOperator<f64> {
        let l = ladder_operators::<f64>(cutoff);
        let id = ModeOperator::identity(cutoff);
        tensor(&l.number, &id).unwrap() + tensor(&id, &l.number).unwrap()
    }

    #[test]
    fn identity_tensor_identity_is_identity() {
        let c = FockCutoff::new(3);
        let id = ModeOperator::<f64>::identity(c);
        let op = tensor(&id, &id).unwrap();
        assert_eq!(op, TwoModeOperator::identity(c.into()));
    }

    #[test]
    fn total_number_on_two_three() {
        let c = FockCutoff::new(4);
        let psi = PureState::<f64>::basis(c.into(), 2, 3);
        let out = n_total(c).apply_state(&psi);
        for (i, z) in out.iter().enumerate() {
            let want = if i == 2 * c.dim() + 3 { 5.0 } else { 0.0 };
            assert!((z.re - want).abs() < 1e-15 && z.im == 0.0);
        }
    }

    #[test]
    fn annihilate_on_first_mode() {
        let c = FockCutoff::new(2);
        let l = ladder_operators::<f64>(c);
        let op = tensor(&l.annihilate, &ModeOperator::identity(c)).unwrap();
        let out = op.apply_state(&PureState::basis(c.into(), 1, 0));
        assert!((out[0].re - 1.0).abs() < 1e-15);
        assert!(out.iter().skip(1).all(|z| z.norm_sqr() == 0.0));
    }

    #[test]
    fn tensor_rejects_mismatched_dims() {
        let a = ModeOperator::<f64>::identity(FockCutoff::new(2));
        let b = ModeOperator::<f64>::identity(FockCutoff::new(3));
        assert_eq!(
            tensor(&a, &b),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        );
        assert_eq!(kron(&a, &b).dim(), 12);
    }

    #[test]
    fn components_split_number_conserving_operator() {
        let c = FockCutoff::new(3);
        let l = ladder_operators::<f64>(c);
        let hop = tensor(&l.create, &l.annihilate).unwrap();
        let h = &hop + &hop.adjoint();
        let comps = h.components();
        // one block per total photon number 0..=6
        assert_eq!(comps.len(), 7);
        for comp in comps {
            let totals: Vec<usize> = comp
                .iter()
                .map(|&i| {
                    let (n, m) = h.cutoff().occupations(i);
                    n + m
                })
                .collect();
            assert!(totals.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn product_and_hermiticity() {
        let c = FockCutoff::new(3);
        let l = ladder_operators::<f64>(c);
        let hop = tensor(&l.create, &l.annihilate).unwrap();
        assert!(hop.hermiticity_deviation() > 0.5);
        let h = &hop + &hop.adjoint();
        assert_eq!(h.hermiticity_deviation(), 0.0);
        let n = n_total(c);
        let n2 = &n * &n;
        let psi = PureState::basis(c.into(), 1, 2);
        assert!((n2.expectation(&psi).re - 9.0).abs() < 1e-12);
        assert_eq!(n2.dense_block(&[0, 1]).nrows(), 2);
    }
}
