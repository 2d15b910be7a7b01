use rayon::prelude::*;
use twomode_core::dynamics::{Dynamics, FockDynamicsOracle};
use twomode_core::mean_field::{
    bogoliubov_params, quadratic_check, squeezed_ground_entropy, stationary_amplitude, Branch,
};
use twomode_core::model::{analyze_ground, classify_phase, fock_condensate_entropy, Phase};
use twomode_core::scalar::nats_to_bits;

use crate::config::{Axis, Command, RunConfig, DEFAULT_TIME_POINTS};
use crate::error::CliResult;
use crate::output::{Cell, Table};

/// At most this many oracle samples per dynamics run; the other rows get NaN.
pub const ORACLE_SAMPLES: usize = 12;

pub const PHASE_COLUMNS: [&str; 7] = ["ratio", "n_alpha", "S_analytic", "S_numeric", "gap", "converged", "degenerate"];
pub const SBF_COLUMNS: [&str; 8] = [
    "ratio",
    "nu",
    "branch",
    "theta",
    "epsilon",
    "S_mean_field",
    "S_ed_quadratic",
    "converged",
];

pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    match cfg.command {
        Command::Phase => phase(cfg),
        Command::Sbf => sbf(cfg),
        Command::Dynamics => dynamics(cfg),
    }
}

fn entropy_cell(cfg: &RunConfig, s: f64) -> Cell {
    Cell::Num(if cfg.bits { nats_to_bits(s) } else { s })
}

/// Sweep values paired with the ratio reported for them.
fn sweep_points(cfg: &RunConfig) -> CliResult<Vec<(f64, twomode_core::Params)>> {
    let base = cfg.params()?;
    let sweep = cfg.sweep.expect("phase and sbf always carry a sweep");
    sweep
        .values()
        .into_iter()
        .map(|v| {
            let p = sweep.axis.apply(&base, v).validated()?;
            let ratio = if sweep.axis == Axis::Ratio { v } else { p.critical_ratio() };
            Ok((ratio, p))
        })
        .collect()
}

pub fn phase(cfg: &RunConfig) -> CliResult<Table> {
    let points = sweep_points(cfg)?;
    let rows = points
        .par_iter()
        .map(|(ratio, p)| {
            let class = classify_phase(p);
            let n = class.n_alpha();
            let analytic = match class.phase {
                Phase::Normal => 0.0,
                _ => fock_condensate_entropy::<f64>(n),
            };
            let ed = analyze_ground(p, cfg.cutoff.choice())?;
            Ok(vec![
                Cell::Num(*ratio),
                Cell::Int(n as i64),
                entropy_cell(cfg, analytic),
                entropy_cell(cfg, ed.entropy),
                Cell::Num(ed.gap.unwrap_or(f64::NAN)),
                Cell::Flag(ed.converged),
                Cell::Flag(class.is_degenerate()),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        columns: PHASE_COLUMNS.to_vec(),
        rows,
    })
}

pub fn sbf(cfg: &RunConfig) -> CliResult<Table> {
    let points = sweep_points(cfg)?;
    let rows = points
        .par_iter()
        .map(|(ratio, p)| {
            let sol = stationary_amplitude(p)?;
            let bogo = bogoliubov_params(p, &sol)?;
            let check = quadratic_check(&bogo, cfg.cutoff.fixed())?;
            Ok(vec![
                Cell::Num(*ratio),
                Cell::Num(sol.nu),
                Cell::Text(match sol.branch {
                    Branch::Normal => "normal",
                    Branch::Superfluid => "superfluid",
                }),
                Cell::Num(bogo.theta),
                Cell::Num(bogo.epsilon),
                entropy_cell(cfg, squeezed_ground_entropy(bogo.theta)),
                entropy_cell(cfg, check.entropy),
                Cell::Flag(check.converged),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        columns: SBF_COLUMNS.to_vec(),
        rows,
    })
}

/// Time grid: the t sweep if given, else [0, time-max] with time-points
/// samples, defaulting to three periods of S(t).
pub fn time_grid(cfg: &RunConfig, d: &Dynamics<f64>) -> Vec<f64> {
    if let Some(sw) = cfg.sweep {
        return sw.values();
    }
    let t_max = cfg.time_max.unwrap_or(3.0 * d.period());
    let n = cfg.time_points.unwrap_or(DEFAULT_TIME_POINTS);
    (0..n)
        .map(|i| if i + 1 == n { t_max } else { t_max * (i as f64 / (n - 1) as f64) })
        .collect()
}

pub fn dynamics(cfg: &RunConfig) -> CliResult<Table> {
    let d = Dynamics::new(&cfg.params()?)?;
    let times = time_grid(cfg, &d);
    let oracle = if cfg.with_fock_oracle {
        let o = FockDynamicsOracle::new(&d.params, cfg.cutoff.fixed())?;
        // fills the eigenvector cache once instead of in every worker
        o.evolve(0.0)?;
        Some(o)
    } else {
        None
    };
    let stride = times.len().div_ceil(ORACLE_SAMPLES);
    let rows = times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let c = d.coefficients(t);
            let mut row = vec![Cell::Num(t), entropy_cell(cfg, d.entropy(t)?)];
            if let Some(o) = &oracle {
                if i % stride == 0 || i + 1 == times.len() {
                    let s = o.sample(t)?;
                    row.push(entropy_cell(cfg, s.entropy));
                    row.push(Cell::Flag(s.converged()));
                } else {
                    row.push(Cell::Num(f64::NAN));
                    row.push(Cell::Flag(true));
                }
            }
            row.extend([
                Cell::Num(c.f.re),
                Cell::Num(c.f.im),
                Cell::Num(c.f_prime.re),
                Cell::Num(c.f_prime.im),
                Cell::Num(c.canonical_residual()),
            ]);
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut columns = vec!["t", "S_gaussian"];
    if oracle.is_some() {
        columns.extend(["S_fock_oracle", "fock_converged"]);
    }
    columns.extend(["f_re", "f_im", "fp_re", "fp_im", "canonical_residual"]);
    Ok(Table { columns, rows })
}
