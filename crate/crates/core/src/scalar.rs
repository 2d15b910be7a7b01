//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All math is written against [`Real`], which is implemented for `f32` and
//! `f64`. Tolerances are expressed as `f64` targets and clamped to what the
//! scalar type can actually resolve, so the same code path runs in single
//! precision with proportionally looser checks.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::{Complex, RealField};
use num_traits::ToPrimitive;

/// Real scalar usable by the solvers.
pub trait Real:
    RealField + Copy + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Machine epsilon of the underlying type, widened to `f64`.
    const MACHINE_EPSILON: f64;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("literal representable")
    }

    /// Converts a count or index.
    fn from_count(n: usize) -> Self {
        <Self as num_traits::FromPrimitive>::from_usize(n).expect("count representable")
    }

    /// A tolerance of `target`, never tighter than 64 ulps of this type.
    fn tol(target: f64) -> Self {
        Self::lit(target.max(64.0 * Self::MACHINE_EPSILON))
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const MACHINE_EPSILON: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const MACHINE_EPSILON: f64 = f64::EPSILON;
}

/// Shorthand for a complex number over `T`.
#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `exp(-i phase)`.
#[inline]
pub fn phase_factor<T: Real>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), -phase.sin())
}

/// Entropy in nats of a probability vector; entries below `1e-14` contribute
/// nothing.
pub fn shannon_nats<T: Real, I: IntoIterator<Item = T>>(probabilities: I) -> T {
    let floor = T::lit(1e-14);
    probabilities
        .into_iter()
        .filter(|&p| p >= floor)
        .fold(T::zero(), |acc, p| acc - p * p.ln())
}

/// Converts an entropy in nats to bits.
pub fn nats_to_bits(s: f64) -> f64 {
    s / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_clamped_to_precision() {
        assert_eq!(f64::tol(1e-12), 1e-12);
        assert!(f32::tol(1e-12) > 1e-6);
    }

    #[test]
    fn shannon_of_uniform_pair() {
        let s = shannon_nats([0.5f64, 0.5]);
        assert!((s - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(shannon_nats([1.0f64, 1e-16]), 0.0);
    }
}
