use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use super::cutoff::FockCutoff;
use super::eigen::{hermitian_eigen, DenseEigen};
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Dense operator on a single truncated mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator<T: Real> {
    cutoff: FockCutoff,
    matrix: DMatrix<Complex<T>>,
}

/// Ladder operators of one truncated mode.
///
/// Truncation makes `create |n_max⟩ = 0`, so `[a, a†]` equals the identity
/// except for the `(n_max, n_max)` entry, which is `−n_max`.
#[derive(Debug, Clone)]
pub struct Ladder<T: Real> {
    pub annihilate: ModeOperator<T>,
    pub create: ModeOperator<T>,
    pub number: ModeOperator<T>,
}

pub fn ladder_operators<T: Real>(cutoff: FockCutoff) -> Ladder<T> {
    let dim = cutoff.dim();
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = creal(T::from_count(n).sqrt());
    }
    let annihilate = ModeOperator::from_matrix(cutoff, a).expect("square");
    let create = annihilate.adjoint();
    let number = &create * &annihilate;
    Ladder {
        annihilate,
        create,
        number,
    }
}

impl<T: Real> ModeOperator<T> {
    pub fn from_matrix(cutoff: FockCutoff, matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != cutoff.dim() || matrix.ncols() != cutoff.dim() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows().max(matrix.ncols()),
                right: cutoff.dim(),
            });
        }
        Ok(Self { cutoff, matrix })
    }

    pub fn zeros(cutoff: FockCutoff) -> Self {
        Self {
            cutoff,
            matrix: DMatrix::zeros(cutoff.dim(), cutoff.dim()),
        }
    }

    pub fn identity(cutoff: FockCutoff) -> Self {
        Self {
            cutoff,
            matrix: DMatrix::identity(cutoff.dim(), cutoff.dim()),
        }
    }

    /// Diagonal operator `Σ f(n) |n⟩⟨n|`.
    pub fn from_diagonal(cutoff: FockCutoff, f: impl Fn(usize) -> T) -> Self {
        let diag = DVector::from_iterator(cutoff.dim(), (0..cutoff.dim()).map(|n| creal(f(n))));
        Self {
            cutoff,
            matrix: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff.dim()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            cutoff: self.cutoff,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            cutoff: self.cutoff,
            matrix: self.matrix.map(|z| z * factor),
        }
    }

    pub fn apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        &self.matrix * v
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn hermiticity_deviation(&self) -> T {
        let norm = self.matrix.norm();
        if norm == T::zero() {
            return T::zero();
        }
        (&self.matrix - self.matrix.adjoint()).norm() / norm
    }

    /// Full ascending eigen-decomposition; rejects non-Hermitian input.
    pub fn eigen(&self) -> Result<DenseEigen<T>> {
        let dev = self.hermiticity_deviation();
        if dev > T::tol(1e-12) {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        hermitian_eigen(&self.matrix)
    }
}

impl<'a, T: Real> Add<&'a ModeOperator<T>> for &'a ModeOperator<T> {
    type Output = ModeOperator<T>;
    fn add(self, rhs: &'a ModeOperator<T>) -> ModeOperator<T> {
        assert_eq!(self.cutoff, rhs.cutoff, "operator cutoffs differ");
        ModeOperator {
            cutoff: self.cutoff,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<'a, T: Real> Sub<&'a ModeOperator<T>> for &'a ModeOperator<T> {
    type Output = ModeOperator<T>;
    fn sub(self, rhs: &'a ModeOperator<T>) -> ModeOperator<T> {
        assert_eq!(self.cutoff, rhs.cutoff, "operator cutoffs differ");
        ModeOperator {
            cutoff: self.cutoff,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<'a, T: Real> Mul<&'a ModeOperator<T>> for &'a ModeOperator<T> {
    type Output = ModeOperator<T>;
    fn mul(self, rhs: &'a ModeOperator<T>) -> ModeOperator<T> {
        assert_eq!(self.cutoff, rhs.cutoff, "operator cutoffs differ");
        ModeOperator {
            cutoff: self.cutoff,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl<T: Real> Add for ModeOperator<T> {
    type Output = ModeOperator<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Real> Sub for ModeOperator<T> {
    type Output = ModeOperator<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Real> Mul for ModeOperator<T> {
    type Output = ModeOperator<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dim: usize, n: usize) -> DVector<Complex<f64>> {
        let mut v = DVector::zeros(dim);
        v[n] = creal(1.0);
        v
    }

    #[test]
    fn annihilate_lowers_with_sqrt_n() {
        let l = ladder_operators::<f64>(FockCutoff::new(2));
        let out = l.annihilate.apply(&basis(3, 2));
        assert_eq!(out[0], creal(0.0));
        assert!((out[1].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(out[2], creal(0.0));
    }

    #[test]
    fn number_annihilates_vacuum() {
        let l = ladder_operators::<f64>(FockCutoff::new(4));
        assert!(l.number.apply(&basis(5, 0)).iter().all(|z| z.norm_sqr() == 0.0));
        assert_eq!(l.create, l.annihilate.adjoint());
    }

    #[test]
    fn truncated_commutator() {
        let n_max = 6;
        let l = ladder_operators::<f64>(FockCutoff::new(n_max));
        let comm = l.annihilate.commutator(&l.create);
        for i in 0..=n_max {
            for j in 0..=n_max {
                let want = match (i == j, i == n_max) {
                    (true, true) => -(n_max as f64),
                    (true, false) => 1.0,
                    _ => 0.0,
                };
                assert!((comm.matrix()[(i, j)].re - want).abs() < 1e-12, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn create_kills_top_state() {
        let l = ladder_operators::<f64>(FockCutoff::new(3));
        assert!(l.create.apply(&basis(4, 3)).iter().all(|z| z.norm_sqr() == 0.0));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let l = ladder_operators::<f64>(FockCutoff::new(3));
        assert!(matches!(l.annihilate.eigen(), Err(Error::NotHermitian { .. })));
        let e = l.number.eigen().unwrap();
        assert!((e.values[3] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_precision_ladder() {
        let l = ladder_operators::<f32>(FockCutoff::new(3));
        let comm = l.annihilate.commutator(&l.create);
        assert!((comm.matrix()[(0, 0)].re - 1.0).abs() < 1e-6);
    }
}
