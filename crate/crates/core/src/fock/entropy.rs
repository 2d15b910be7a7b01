use nalgebra::{Complex, DMatrix};

use super::state::{partial_trace, DensityMatrix, Mode, PureState};
use crate::error::{Error, Result};
use crate::scalar::{cplx, shannon_nats, Real};

/// Above this reduced dimension the entanglement entropy is computed from
/// a low-rank Schmidt spectrum instead of a full diagonalization.
pub const LOW_RANK_THRESHOLD: usize = 400;

/// `−Tr ρ ln ρ` in nats. The trace must be within 1e−8 of one.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let dev = (rho.trace() - T::one()).abs();
    if dev > T::tol(1e-8) {
        return Err(Error::TraceDeviation(dev.to_f64_lossy()));
    }
    Ok(shannon_nats(rho.eigenvalues()?))
}

/// Entanglement entropy between the two modes of a pure state.
///
/// Diagonalizes the reduced state of whichever mode has the smaller
/// dimension, so very unequal cutoffs stay cheap.
pub fn entanglement_entropy<T: Real>(state: &PureState<T>) -> Result<T> {
    let c = state.cutoff();
    if c.first.dim().min(c.second.dim()) > LOW_RANK_THRESHOLD {
        return Ok(shannon_nats(low_rank_schmidt_weights(&state.amplitude_matrix(), 1e-12)?));
    }
    let keep = if c.first.dim() <= c.second.dim() {
        Mode::First
    } else {
        Mode::Second
    };
    Ok(shannon_nats(partial_trace(state, keep).eigenvalues()?))
}

/// Schmidt coefficients (descending) from a singular value decomposition.
pub fn schmidt_coefficients<T: Real>(state: &PureState<T>) -> Vec<T> {
    let mut s: Vec<T> = state.amplitude_matrix().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    s
}

/// Entanglement entropy from the Schmidt spectrum.
pub fn schmidt_entropy<T: Real>(state: &PureState<T>) -> T {
    shannon_nats(schmidt_coefficients(state).into_iter().map(|s| s * s))
}

/// Leading squared singular values of `m` by a deterministic randomized
/// range finder with one orthonormalized power step. The sketch doubles until the captured
/// weight reaches `1 − missing` of ‖m‖²_F, or the full rank.
pub fn low_rank_schmidt_weights<T: Real>(m: &DMatrix<Complex<T>>, missing: f64) -> Result<Vec<T>> {
    let (rows, cols) = m.shape();
    let full = rows.min(cols);
    let total = m.norm_squared();
    let mut k = 16.min(full);
    loop {
        let omega = DMatrix::from_fn(cols, k, |r, c| {
            let x = ((r * 7919 + c * 104_729 + 1) as f64 * 0.618_033_988_749_895).fract();
            let y = ((r * 15_485_863 + c * 32_452_843 + 3) as f64 * 0.754_877_666_246_693).fract();
            cplx(T::lit(x - 0.5), T::lit(y - 0.5))
        });
        // one power step, re-orthonormalized so small singular directions
        // are not pushed below rounding
        let q = (m * omega).qr().q();
        let q = m.ad_mul(&q).qr().q();
        let q = (m * q).qr().q();
        let b = q.ad_mul(m);
        let mut weights: Vec<T> = b.singular_values().iter().map(|&s| s * s).collect();
        weights.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        let captured = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        if captured >= total * (T::one() - T::tol(missing)) || k == full {
            return Ok(weights);
        }
        if k * 2 > full {
            // the sketch would cover everything; use the exact spectrum
            let mut exact: Vec<T> = m.singular_values().iter().map(|&s| s * s).collect();
            exact.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            return Ok(exact);
        }
        k *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::cutoff::TwoModeCutoff;
    use crate::scalar::creal;
    use nalgebra::DVector;

    #[test]
    fn pure_product_has_zero_entropy() {
        let psi = PureState::<f64>::basis(TwoModeCutoff::square(3), 2, 1);
        assert!(entanglement_entropy(&psi).unwrap().abs() < 1e-14);
        assert!(schmidt_entropy(&psi).abs() < 1e-14);
    }

    #[test]
    fn uniform_superposition_has_log_entropy() {
        let c = TwoModeCutoff::square(3);
        let mut v = DVector::zeros(c.dim());
        for n in 0..4 {
            v[c.index(n, 3 - n)] = creal(1.0);
        }
        let psi = PureState::<f64>::new(c, v).unwrap();
        let expected = 4f64.ln();
        assert!((entanglement_entropy(&psi).unwrap() - expected).abs() < 1e-13);
        assert!((schmidt_entropy(&psi) - expected).abs() < 1e-13);
    }

    #[test]
    fn low_rank_spectrum_matches_exact() {
        let c = TwoModeCutoff::square(60);
        let v = DVector::from_fn(c.dim(), |i, _| {
            let (n, m) = c.occupations(i);
            creal((-(0.3 * n as f64) - 0.5 * m as f64 - 0.01 * (n * m) as f64).exp())
        });
        let psi = PureState::<f64>::new(c, v).unwrap();
        let fast = shannon_nats(low_rank_schmidt_weights(&psi.amplitude_matrix(), 1e-12).unwrap());
        assert!((fast - schmidt_entropy(&psi)).abs() < 1e-10);
    }

    #[test]
    fn mixed_diagonal_state() {
        let rho = DensityMatrix::diagonal(&[0.25f64; 4]).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 4f64.ln()).abs() < 1e-14);
        let off = DensityMatrix::diagonal(&[0.5f64, 0.4]).unwrap();
        assert!(matches!(von_neumann_entropy(&off), Err(Error::TraceDeviation(_))));
    }
}
