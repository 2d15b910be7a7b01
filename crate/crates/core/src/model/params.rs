use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical parameters of the two-mode Kerr model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T: Real> {
    /// Mode frequency ω.
    pub omega: T,
    /// Transfer strength w.
    pub w: T,
    /// Kerr strength g.
    pub g: T,
    /// Symmetry-breaking field amplitude λ.
    pub lambda: T,
    /// Initial coherent amplitude ν′ per mode (dynamics only).
    pub nu_prime: T,
}

impl<T: Real> ModelParams<T> {
    /// Parameters with λ = ν′ = 0.
    pub fn new(omega: T, w: T, g: T) -> Result<Self> {
        Self {
            omega,
            w,
            g,
            lambda: T::zero(),
            nu_prime: T::zero(),
        }
        .validated()
    }

    pub fn with_lambda(self, lambda: T) -> Result<Self> {
        Self { lambda, ..self }.validated()
    }

    pub fn with_nu_prime(self, nu_prime: T) -> Result<Self> {
        Self { nu_prime, ..self }.validated()
    }

    /// Checks ω > 0, w ≥ 0, g > 0, λ ≥ 0, ν′ ≥ 0 and finiteness.
    pub fn validated(self) -> Result<Self> {
        let fields = [
            ("omega", self.omega),
            ("w", self.w),
            ("g", self.g),
            ("lambda", self.lambda),
            ("nu_prime", self.nu_prime),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.omega <= T::zero() {
            return Err(Error::InvalidParams(format!("omega must be > 0, got {}", self.omega)));
        }
        if self.g <= T::zero() {
            return Err(Error::InvalidParams(format!(
                "g must be > 0 (the Hamiltonian is unbounded below otherwise), got {}",
                self.g
            )));
        }
        for (name, v) in [("w", self.w), ("lambda", self.lambda), ("nu_prime", self.nu_prime)] {
            if v < T::zero() {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(self)
    }

    /// ω − w, the α-mode frequency.
    pub fn detuning(&self) -> T {
        self.omega - self.w
    }

    /// ω − w + g, the coefficient selecting the mean-field branch.
    pub fn effective_detuning(&self) -> T {
        self.omega - self.w + self.g
    }

    /// (w − ω)/(2g), the unrounded condensate occupation.
    pub fn occupation_ratio(&self) -> T {
        (self.w - self.omega) / (T::lit(2.0) * self.g)
    }

    /// w/(ω + g), the control parameter of the phase diagrams.
    pub fn critical_ratio(&self) -> T {
        self.w / (self.omega + self.g)
    }

    /// Energy of `|n⟩_α|0⟩_β` at λ = 0: (ω − w)n + g n².
    pub fn alpha_level(&self, n: usize) -> T {
        let n = T::from_count(n);
        self.detuning() * n + self.g * n * n
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> ModelParams<U> {
        ModelParams {
            omega: U::lit(self.omega.to_f64_lossy()),
            w: U::lit(self.w.to_f64_lossy()),
            g: U::lit(self.g.to_f64_lossy()),
            lambda: U::lit(self.lambda.to_f64_lossy()),
            nu_prime: U::lit(self.nu_prime.to_f64_lossy()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(ModelParams::<f64>::new(1.0, 0.5, 0.0).is_err());
        assert!(ModelParams::<f64>::new(0.0, 0.5, 0.01).is_err());
        assert!(ModelParams::<f64>::new(1.0, -0.5, 0.01).is_err());
        assert!(ModelParams::<f64>::new(1.0, f64::NAN, 0.01).is_err());
        let p = ModelParams::<f64>::new(1.0, 0.5, 0.01).unwrap();
        assert!(p.with_lambda(-0.1).is_err());
        assert!(p.with_nu_prime(f64::INFINITY).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = ModelParams::<f64>::new(1.0, 1.04, 0.01).unwrap();
        assert!((p.occupation_ratio() - 2.0).abs() < 1e-12);
        assert!((p.alpha_level(2) - (-0.04)).abs() < 1e-15);
    }
}
