use crate::error::Result;
use crate::model::ModelParams;
use crate::scalar::Real;

use super::evolution::Dynamics;

/// εt below which the growth is compared across fields.
pub const SHORT_TIME_LIMIT: f64 = 0.3;
/// εt window used as the reference for spread at later times.
pub const LATE_WINDOW: (f64, f64) = (0.8, 1.2);
/// λ < FREE_DIFFUSION_FRACTION · 2gν³ counts as the free-diffusion regime.
pub const FREE_DIFFUSION_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityCurve<T: Real> {
    pub lambda: T,
    pub nu: T,
    pub epsilon: T,
    pub entropy: Vec<T>,
    /// λ < 0.1 · 2gν³.
    pub free_diffusion: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport<T: Real> {
    pub times: Vec<T>,
    /// Quasiparticle energy at the base parameters, used to scale the grid.
    pub epsilon_ref: T,
    pub curves: Vec<SensitivityCurve<T>>,
    /// (max − min)/max of S over the fields at each time; 0 where all vanish.
    pub spread_by_time: Vec<T>,
    /// Largest spread with ε_ref t < 0.3 (and t > 0).
    pub short_time_spread: T,
    /// Largest spread with ε_ref t in [0.8, 1.2].
    pub late_window_spread: T,
}

/// Entropy curves for each field value on a common time grid, and how far
/// they fan out relative to each other.
pub fn short_time_sbf_sensitivity<T: Real>(
    base: &ModelParams<T>,
    lambdas: &[T],
    times: &[T],
) -> Result<SensitivityReport<T>> {
    let epsilon_ref = Dynamics::new(base)?.bogo.epsilon;
    let mut curves = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let d = Dynamics::new(&base.with_lambda(lambda)?)?;
        let nu = d.solution.nu;
        let entropy = times.iter().map(|&t| d.entropy(t)).collect::<Result<Vec<_>>>()?;
        let scale = T::lit(2.0) * d.params.g * nu * nu * nu;
        curves.push(SensitivityCurve {
            lambda,
            nu,
            epsilon: d.bogo.epsilon,
            entropy,
            free_diffusion: lambda < T::lit(FREE_DIFFUSION_FRACTION) * scale,
        });
    }
    let spread_by_time: Vec<T> = (0..times.len())
        .map(|i| {
            let (lo, hi) = curves.iter().fold((T::max_value().unwrap(), T::zero()), |(lo, hi), c| {
                (lo.min(c.entropy[i]), hi.max(c.entropy[i]))
            });
            if hi > T::zero() {
                (hi - lo) / hi
            } else {
                T::zero()
            }
        })
        .collect();
    let max_where = |keep: &dyn Fn(T) -> bool| {
        times
            .iter()
            .zip(&spread_by_time)
            .filter(|(&t, _)| keep(epsilon_ref * t))
            .fold(T::zero(), |m, (_, &s)| m.max(s))
    };
    let short_time_spread = max_where(&|x| x > T::zero() && x < T::lit(SHORT_TIME_LIMIT));
    let late_window_spread = max_where(&|x| x >= T::lit(LATE_WINDOW.0) && x <= T::lit(LATE_WINDOW.1));
    Ok(SensitivityReport {
        times: times.to_vec(),
        epsilon_ref,
        curves,
        spread_by_time,
        short_time_spread,
        late_window_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams<f64> {
        ModelParams::<f64>::new(1.0, 2.0, 0.1).unwrap().with_lambda(0.11).unwrap()
    }

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn single_field_has_no_spread() {
        let r = short_time_sbf_sensitivity(&base(), &[0.11], &grid(50, 5.0)).unwrap();
        assert!(r.spread_by_time.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn spread_grows_with_time() {
        let times = grid(400, 1.2 / 0.31379147742303104);
        let r = short_time_sbf_sensitivity(&base(), &[0.05, 0.11], &times).unwrap();
        assert!(r.short_time_spread < r.late_window_spread);
        assert!(r.curves.iter().all(|c| c.free_diffusion));
    }
}
