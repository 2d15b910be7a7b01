use nalgebra::{Complex, DMatrix, DVector};

use super::cutoff::{FockCutoff, TwoModeCutoff};
use super::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Normalized vector over a truncated two-mode basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    cutoff: TwoModeCutoff,
    amplitudes: DVector<Complex<T>>,
}

/// Which factor of the two-mode space to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    First,
    Second,
}

impl<T: Real> PureState<T> {
    /// Normalizes `amplitudes`; rejects a length mismatch or a zero vector.
    pub fn new(cutoff: TwoModeCutoff, amplitudes: DVector<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != cutoff.dim() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: cutoff.dim(),
            });
        }
        let norm = amplitudes.norm();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize vector of norm {norm}")));
        }
        Ok(Self {
            cutoff,
            amplitudes: amplitudes / creal(norm),
        })
    }

    pub(crate) fn from_normalized(cutoff: TwoModeCutoff, amplitudes: DVector<Complex<T>>) -> Self {
        Self::new(cutoff, amplitudes).expect("nonzero vector of matching length")
    }

    pub fn basis(cutoff: TwoModeCutoff, n_first: usize, n_second: usize) -> Self {
        assert!(n_first <= cutoff.first.n_max() && n_second <= cutoff.second.n_max());
        let mut v = DVector::zeros(cutoff.dim());
        v[cutoff.index(n_first, n_second)] = creal(T::one());
        Self { cutoff, amplitudes: v }
    }

    /// `|first⟩ ⊗ |second⟩` from single-mode amplitude vectors.
    pub fn product(first: &DVector<Complex<T>>, second: &DVector<Complex<T>>) -> Result<Self> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidState("empty factor".into()));
        }
        let cutoff = TwoModeCutoff::new(FockCutoff::new(first.len() - 1), FockCutoff::new(second.len() - 1));
        let amps = DVector::from_fn(cutoff.dim(), |i, _| {
            let (n, m) = cutoff.occupations(i);
            first[n] * second[m]
        });
        Self::new(cutoff, amps)
    }

    pub fn cutoff(&self) -> TwoModeCutoff {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex<T>> {
        self.amplitudes
    }

    pub fn amplitude(&self, n_first: usize, n_second: usize) -> Complex<T> {
        self.amplitudes[self.cutoff.index(n_first, n_second)]
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    /// Amplitudes reshaped to a `(dim_first × dim_second)` matrix.
    pub fn amplitude_matrix(&self) -> DMatrix<Complex<T>> {
        let (r, c) = (self.cutoff.first.dim(), self.cutoff.second.dim());
        DMatrix::from_fn(r, c, |n, m| self.amplitudes[self.cutoff.index(n, m)])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.cutoff, other.cutoff, "state cutoffs differ");
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// `(⟨n_first⟩, ⟨n_second⟩)`.
    pub fn mean_occupations(&self) -> (T, T) {
        self.cutoff
            .basis()
            .fold((T::zero(), T::zero()), |(a, b), (i, n, m)| {
                let p = self.amplitudes[i].norm_sqr();
                (a + p * T::from_count(n), b + p * T::from_count(m))
            })
    }

    /// Total probability on basis states satisfying `pred(n_first, n_second)`.
    pub fn weight_where(&self, pred: impl Fn(usize, usize) -> bool) -> T {
        self.cutoff
            .basis()
            .filter(|&(_, n, m)| pred(n, m))
            .fold(T::zero(), |acc, (i, _, _)| acc + self.amplitudes[i].norm_sqr())
    }

    /// Largest `n_first + n_second` carrying a nonzero amplitude.
    pub fn max_total_occupation(&self) -> usize {
        self.cutoff
            .basis()
            .filter(|&(i, _, _)| self.amplitudes[i].norm_sqr() > T::zero())
            .map(|(_, n, m)| n + m)
            .max()
            .unwrap_or(0)
    }

    /// Re-expresses the state in a cutoff at least as large in both modes.
    pub fn embed(&self, cutoff: TwoModeCutoff) -> Result<Self> {
        if cutoff.first < self.cutoff.first || cutoff.second < self.cutoff.second {
            return Err(Error::DimensionMismatch {
                left: self.cutoff.dim(),
                right: cutoff.dim(),
            });
        }
        let mut v = DVector::zeros(cutoff.dim());
        for (i, n, m) in self.cutoff.basis() {
            v[cutoff.index(n, m)] = self.amplitudes[i];
        }
        Ok(Self { cutoff, amplitudes: v })
    }

    /// Projects onto a cutoff and renormalizes; returns the discarded weight.
    pub fn truncate(&self, cutoff: TwoModeCutoff) -> Result<(Self, T)> {
        let mut v = DVector::zeros(cutoff.dim());
        let mut lost = T::zero();
        for (i, n, m) in self.cutoff.basis() {
            if n <= cutoff.first.n_max() && m <= cutoff.second.n_max() {
                v[cutoff.index(n, m)] = self.amplitudes[i];
            } else {
                lost += self.amplitudes[i].norm_sqr();
            }
        }
        Ok((Self::new(cutoff, v)?, lost))
    }
}

/// Hermitian positive-semidefinite matrix meant to have unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Accepts any square Hermitian matrix (relative deviation ≤ 1e−12);
    /// trace and positivity are checked by [`DensityMatrix::validate`].
    pub fn from_matrix(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let norm = matrix.norm();
        if norm > T::zero() {
            let dev = (&matrix - matrix.adjoint()).norm() / norm;
            if dev > T::tol(1e-12) {
                return Err(Error::InvalidDensityMatrix(format!(
                    "not Hermitian (relative deviation {dev:e})"
                )));
            }
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(probabilities: &[T]) -> Result<Self> {
        let d = DVector::from_iterator(probabilities.len(), probabilities.iter().map(|&p| creal(p)));
        Self::from_matrix(DMatrix::from_diagonal(&d))
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> T {
        self.matrix.diagonal().iter().fold(T::zero(), |acc, z| acc + z.re)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix)
            .diagonal()
            .iter()
            .fold(T::zero(), |acc, z| acc + z.re)
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(hermitian_eigen(&self.matrix)?.values)
    }

    /// Unit trace within 1e−12 and eigenvalues ≥ −1e−12.
    pub fn validate(&self) -> Result<()> {
        let dev = (self.trace() - T::one()).abs();
        if dev > T::tol(1e-12) {
            return Err(Error::TraceDeviation(dev.to_f64_lossy()));
        }
        let min = self.eigenvalues()?.first().copied().unwrap_or_else(T::zero);
        if min < -T::tol(1e-12) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Reduced state of one mode of a pure two-mode state.
pub fn partial_trace<T: Real>(state: &PureState<T>, keep: Mode) -> DensityMatrix<T> {
    let m = state.amplitude_matrix();
    let rho = match keep {
        Mode::First => &m * m.adjoint(),
        Mode::Second => m.transpose() * m.conjugate(),
    };
    DensityMatrix { matrix: rho }
}

/// Truncated coherent state together with the probability lost to truncation.
#[derive(Debug, Clone)]
pub struct CoherentState<T: Real> {
    pub state: PureState<T>,
    pub truncated_weight: T,
}

/// Amplitudes `e^{−|z|²/2} zⁿ/√n!` for `n ≤ n_max`, renormalized, and the
/// weight beyond the cutoff. Requires `|z|² ≤ n_max/4`.
pub fn single_mode_coherent<T: Real>(z: Complex<T>, cutoff: FockCutoff) -> Result<(DVector<Complex<T>>, T)> {
    let r2 = z.norm_sqr();
    if r2 > T::from_count(cutoff.n_max()) / T::lit(4.0) {
        return Err(Error::AmplitudeTooLarge {
            norm_sqr: r2.to_f64_lossy(),
            n_max: cutoff.n_max(),
        });
    }
    let mut v = DVector::zeros(cutoff.dim());
    v[0] = creal((-r2 / T::lit(2.0)).exp());
    for n in 1..cutoff.dim() {
        v[n] = v[n - 1] * z / creal(T::from_count(n).sqrt());
    }
    // the tail is summed directly; 1 − kept would only resolve it to rounding
    let mut term = v[cutoff.n_max()].norm_sqr();
    let mut truncated = T::zero();
    let mut n = cutoff.dim();
    loop {
        term = term * r2 / T::from_count(n);
        truncated += term;
        if term <= truncated * T::lit(T::MACHINE_EPSILON) || term == T::zero() {
            break;
        }
        n += 1;
    }
    let norm = v.norm_squared().sqrt();
    Ok((v / creal(norm), truncated))
}

/// Product coherent state `|z_first⟩|z_second⟩`.
pub fn coherent_state<T: Real>(
    z_first: Complex<T>,
    z_second: Complex<T>,
    cutoff: TwoModeCutoff,
) -> Result<CoherentState<T>> {
    let (a, wa) = single_mode_coherent(z_first, cutoff.first)?;
    let (b, wb) = single_mode_coherent(z_second, cutoff.second)?;
    Ok(CoherentState {
        state: PureState::product(&a, &b)?,
        truncated_weight: T::one() - (T::one() - wa) * (T::one() - wb),
    })
}
