use crate::scalar::{shannon_nats, Real};

use super::params::ModelParams;

/// Relative band on (w − ω)/(2g) inside which ties are detected.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// ω − w > 0: the ground state is the vacuum.
    Normal,
    /// Ground state `|n_α⟩|0_β⟩`.
    Condensate { n_alpha: usize },
    /// (w − ω)/(2g) is a half-odd integer and `|lower⟩` and `|lower + 1⟩` are degenerate.
    DegenerateBoundary { lower: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseClassification<T: Real> {
    pub phase: Phase,
    pub ground_energy: T,
}

impl<T: Real> PhaseClassification<T> {
    /// α occupation of the ground state; at a boundary, the lower candidate.
    pub fn n_alpha(&self) -> usize {
        match self.phase {
            Phase::Normal => 0,
            Phase::Condensate { n_alpha } => n_alpha,
            Phase::DegenerateBoundary { lower } => lower,
        }
    }

    /// Both candidate occupations at a boundary, otherwise one.
    pub fn candidates(&self) -> Vec<usize> {
        match self.phase {
            Phase::DegenerateBoundary { lower } => vec![lower, lower + 1],
            _ => vec![self.n_alpha()],
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.phase, Phase::DegenerateBoundary { .. })
    }
}

/// Ground state of the unperturbed Hamiltonian (λ is ignored).
pub fn classify_phase<T: Real>(params: &ModelParams<T>) -> PhaseClassification<T> {
    if params.detuning() > T::zero() {
        return PhaseClassification {
            phase: Phase::Normal,
            ground_energy: T::zero(),
        };
    }
    let r = params.occupation_ratio().to_f64_lossy();
    let floor = r.floor();
    let band = TIE_TOLERANCE * r.abs().max(1.0);
    let phase = if (r - floor - 0.5).abs() <= band {
        Phase::DegenerateBoundary { lower: floor as usize }
    } else {
        Phase::Condensate {
            n_alpha: r.round() as usize,
        }
    };
    let tmp = PhaseClassification {
        phase,
        ground_energy: T::zero(),
    };
    PhaseClassification {
        ground_energy: params.alpha_level(tmp.n_alpha()),
        ..tmp
    }
}

/// Entanglement entropy (nats) of `|n⟩_α|0⟩_β` between modes a and b: the
/// Shannon entropy of the binomial distribution C(n, k)/2ⁿ.
pub fn fock_condensate_entropy<T: Real>(n_alpha: usize) -> T {
    // log-binomials by running sum, stable for any n
    let n = n_alpha;
    let ln2n = n as f64 * std::f64::consts::LN_2;
    let mut ln_c = 0.0f64;
    let probs = (0..=n).map(|k| {
        if k > 0 {
            ln_c += ((n - k + 1) as f64 / k as f64).ln();
        }
        (ln_c - ln2n).exp()
    });
    T::lit(shannon_nats(probs))
}
