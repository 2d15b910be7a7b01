use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// ω − w + g ≥ 0: the amplitude vanishes with λ.
    Normal,
    /// ω − w + g < 0: the amplitude tends to ν* as λ → 0.
    Superfluid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CondensateSolution<T: Real> {
    pub nu: T,
    pub e0: T,
    pub branch: Branch,
    /// All real stationary points, ascending.
    pub all_real_roots: Vec<T>,
    /// Set at λ = 0 on the superfluid branch, where ±ν* are degenerate.
    pub zero_field_limit: bool,
}

impl<T: Real> CondensateSolution<T> {
    /// `|2gν³ + (ω − w + g)ν − λ|` at the returned amplitude.
    pub fn residual(&self, params: &ModelParams<T>) -> T {
        stationarity(params, self.nu).abs()
    }
}

/// E₀(ν) = (ω − w + g)ν² + gν⁴ − 2λν.
pub fn mean_field_energy<T: Real>(params: &ModelParams<T>, nu: T) -> T {
    let nu2 = nu * nu;
    params.effective_detuning() * nu2 + params.g * nu2 * nu2 - T::lit(2.0) * params.lambda * nu
}

/// ½ dE₀/dν = 2gν³ + (ω − w + g)ν − λ.
pub fn stationarity<T: Real>(params: &ModelParams<T>, nu: T) -> T {
    T::lit(2.0) * params.g * nu * nu * nu + params.effective_detuning() * nu - params.lambda
}

/// √((w − ω − g)/(2g)), the zero-field superfluid amplitude, if it exists.
pub fn zero_field_amplitude<T: Real>(params: &ModelParams<T>) -> Option<T> {
    let c = params.effective_detuning();
    (c < T::zero()).then(|| (-c / (T::lit(2.0) * params.g)).sqrt())
}

/// Real roots of ν³ + pν + q = 0 by the trigonometric/hyperbolic forms,
/// which avoid the cancellation of Cardano's formula.
fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    use std::f64::consts::PI;
    if p == 0.0 {
        return vec![(-q).cbrt()];
    }
    let disc = 4.0 * p * p * p + 27.0 * q * q;
    if p < 0.0 && disc <= 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut roots: Vec<f64> = (0..3).map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos()).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots
    } else if p > 0.0 {
        let m = 2.0 * (p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p)) * (3.0 / p).sqrt();
        vec![-m * (arg.asinh() / 3.0).sinh()]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (-3.0 * q.abs() / (2.0 * p)) * (-3.0 / p).sqrt();
        vec![-q.signum() * m * (arg.acosh() / 3.0).cosh()]
    }
}

/// Newton polish until the stationarity residual stops improving.
fn polish<T: Real>(params: &ModelParams<T>, mut nu: T) -> T {
    let six = T::lit(6.0);
    for _ in 0..60 {
        let f = stationarity(params, nu);
        if f == T::zero() {
            break;
        }
        let df = six * params.g * nu * nu + params.effective_detuning();
        if df == T::zero() {
            break;
        }
        let next = nu - f / df;
        if stationarity(params, next).abs() >= f.abs() {
            break;
        }
        nu = next;
    }
    nu
}

/// Global minimizer of E₀ over the real roots of the stationarity cubic.
pub fn stationary_amplitude<T: Real>(params: &ModelParams<T>) -> Result<CondensateSolution<T>> {
    let params = params.validated()?;
    let c = params.effective_detuning();
    let branch = if c < T::zero() { Branch::Superfluid } else { Branch::Normal };

    if params.lambda == T::zero() {
        let star = zero_field_amplitude(&params);
        let (nu, roots, limit) = match star {
            Some(s) => (s, vec![-s, T::zero(), s], true),
            None => (T::zero(), vec![T::zero()], false),
        };
        return Ok(CondensateSolution {
            nu,
            e0: mean_field_energy(&params, nu),
            branch,
            all_real_roots: roots,
            zero_field_limit: limit,
        });
    }

    let two_g = (T::lit(2.0) * params.g).to_f64_lossy();
    let p = c.to_f64_lossy() / two_g;
    let q = -params.lambda.to_f64_lossy() / two_g;
    let mut roots: Vec<T> = depressed_cubic_roots(p, q)
        .into_iter()
        .map(|r| polish(&params, T::lit(r)))
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite root"));
    roots.dedup_by(|a, b| (*a - *b).abs() <= T::tol(1e-14) * T::one().max(a.abs()));

    let best = roots
        .iter()
        .copied()
        .min_by(|&a, &b| {
            let (ea, eb) = (mean_field_energy(&params, a), mean_field_energy(&params, b));
            let tie = (ea - eb).abs() <= T::tol(1e-15) * T::one().max(ea.abs());
            if tie {
                // prefer the non-negative amplitude
                b.partial_cmp(&a).expect("finite")
            } else {
                ea.partial_cmp(&eb).expect("finite")
            }
        })
        .ok_or_else(|| Error::NoConvergence("stationarity cubic has no real root".into()))?;

    let tol = T::tol(1e-12);
    if stationarity(&params, best).abs() > tol {
        return Err(Error::NoConvergence(format!(
            "stationarity residual {:e} above {:e}",
            stationarity(&params, best),
            tol
        )));
    }
    Ok(CondensateSolution {
        nu: best,
        e0: mean_field_energy(&params, best),
        branch,
        all_real_roots: roots,
        zero_field_limit: false,
    })
}
