//! Command-line front end for the two-mode Kerr model: configuration,
//! parameter sweeps written as CSV, and the validation suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validate;

pub use config::{Command, FileConfig, Overrides, RunConfig};
pub use error::{exit, CliError, CliResult};

/// Runs `f` on a pool of `jobs` workers (all cores when `None`).
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> CliResult<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs:?} workers: {e}")))?;
    Ok(pool.install(f))
}
