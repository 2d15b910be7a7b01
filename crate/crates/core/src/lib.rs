//! Numerics for a two-mode Kerr photon model: truncated Fock-space exact
//! diagonalization, mean-field and Bogoliubov theory with a
//! symmetry-breaking field, and Gaussian dynamics of coherent states.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the common double-precision instantiation.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod mean_field;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Params = model::ModelParams<f64>;
pub type Params32 = model::ModelParams<f32>;
pub type State = fock::PureState<f64>;
pub type Operator = fock::TwoModeOperator<f64>;
pub type Density = fock::DensityMatrix<f64>;
pub type Condensate = mean_field::CondensateSolution<f64>;
pub type Bogoliubov = mean_field::BogoliubovParams<f64>;
pub type Coefficients = dynamics::EvolutionCoefficients<f64>;
pub type Gaussian = dynamics::GaussianState<f64>;
