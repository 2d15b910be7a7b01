use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use twomode_core::dynamics::{
    covariance_from_coefficients, heisenberg_coefficients, short_time_sbf_sensitivity, Dynamics, FockDynamicsOracle,
};
use twomode_core::fock::{
    entanglement_entropy, level_shift, lowest_energies, partial_trace, partitioned_shift, propagate, schmidt_entropy,
    von_neumann_entropy, Mode, PureState, SolverOptions, TwoModeCutoff,
};
use twomode_core::mean_field::{
    bogoliubov_params, mean_field_energy, quadratic_check, squeezed_ground_entropy, stationary_amplitude,
    weak_coupling_report,
};
use twomode_core::model::{
    analyze_ground, build_hamiltonian_ab, build_hamiltonian_alphabeta, build_sbf_hamiltonian, classify_phase,
    fock_condensate_entropy, perturbative_energy_shift, rotate_modes, CutoffChoice, Phase, Rotation,
};
use twomode_core::Params;

use crate::commands;
use crate::config::{Command, CutoffSpec, FileConfig, Overrides, RunConfig, SweepSpec};
use crate::output::{render_csv, Table, TOOL, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Reduced grids, no cutoff doubling.
    Quick,
    /// Full figure grids and cutoff-doubling checks.
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    pub measured: f64,
    /// Bound the measured value is compared with; see `relation`.
    pub tolerance: f64,
    pub relation: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn at_most(id: &'static str, description: &'static str, measured: f64, tolerance: f64) -> Self {
        Self {
            id,
            description,
            measured,
            tolerance,
            relation: "<=",
            passed: measured <= tolerance,
            detail: String::new(),
        }
    }

    fn at_least(id: &'static str, description: &'static str, measured: f64, bound: f64) -> Self {
        Self {
            id,
            description,
            measured,
            tolerance: bound,
            relation: ">=",
            passed: measured >= bound,
            detail: String::new(),
        }
    }

    fn below(id: &'static str, description: &'static str, measured: f64, bound: f64) -> Self {
        Self {
            id,
            description,
            measured,
            tolerance: bound,
            relation: "<",
            passed: measured < bound,
            detail: String::new(),
        }
    }

    fn with(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }

    /// Acceptance criterion number, for ids of the form `acc.N.*`.
    pub fn criterion(&self) -> Option<u32> {
        self.id.strip_prefix("acc.")?.split('.').next()?.parse().ok()
    }

    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{mark} {:<34} {:.3e} {} {:.1e}  {}",
            self.id, self.measured, self.relation, self.tolerance, self.description
        );
        if !self.detail.is_empty() {
            s.push_str(" [");
            s.push_str(&self.detail);
            s.push(']');
        }
        s
    }
}

/// Converts an error inside a check into a failed check.
fn failed(id: &'static str, description: &'static str, err: impl std::fmt::Display) -> Check {
    Check {
        id,
        description,
        measured: f64::NAN,
        tolerance: f64::NAN,
        relation: "ok",
        passed: false,
        detail: format!("error: {err}"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn run(level: Level) -> Report {
    let mut checks = Vec::new();
    for part in [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        fock_invariants,
        model_invariants,
        mean_field_invariants,
        dynamics_invariants,
        cli_invariants,
    ] {
        checks.extend(part(level));
    }
    Report {
        tool: TOOL,
        version: VERSION,
        level,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn reference_point(nu_prime: f64) -> Params {
    Params::new(1.0, 2.0, 0.1)
        .and_then(|p| p.with_lambda(0.11))
        .and_then(|p| p.with_nu_prime(nu_prime))
        .expect("valid parameters")
}

fn config(command: Command, overrides: Overrides) -> RunConfig {
    RunConfig::resolve(command, &FileConfig::default(), &overrides).expect("built-in configuration is valid")
}

fn ratio_sweep(level: Level) -> SweepSpec {
    let points = match level {
        Level::Quick => 51,
        Level::Full => 201,
    };
    SweepSpec {
        axis: crate::config::Axis::Ratio,
        start: 0.5,
        stop: 1.5,
        points,
    }
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Slope of log r against log λ for halving λ.
fn exponents(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).map(|p| (p[0] / p[1]).log2()).collect()
}

// ---------------------------------------------------------------- criteria

pub const PHASE_SWEEP_RUNTIME_LIMIT: f64 = 120.0;

fn criterion_1(level: Level) -> Vec<Check> {
    let cfg = config(
        Command::Phase,
        Overrides {
            sweep: Some(ratio_sweep(level)),
            ..Overrides::default()
        },
    );
    let start = Instant::now();
    let table = match commands::phase(&cfg) {
        Ok(t) => t,
        Err(e) => return vec![failed("acc.1.sweep", "phase sweep runs", e)],
    };
    let elapsed = start.elapsed().as_secs_f64();
    let col = |n: &str| table.column(n).expect("phase column");
    let (ratio, n_alpha, s_an, s_num, conv, degen) = (
        col("ratio"),
        col("n_alpha"),
        col("S_analytic"),
        col("S_numeric"),
        col("converged"),
        col("degenerate"),
    );
    let base = cfg.params().expect("valid");
    let mut normal_max: f64 = 0.0;
    let mut staircase_misses = 0usize;
    let mut formula_max: f64 = 0.0;
    let mut ed_max: f64 = 0.0;
    for i in 0..ratio.len() {
        let p = crate::config::Axis::Ratio.apply(&base, ratio[i]);
        let class = classify_phase(&p);
        if class.phase == Phase::Normal {
            normal_max = normal_max.max(s_an[i].abs()).max(s_num[i].abs());
        } else if degen[i] == 0.0 {
            let expected = p.occupation_ratio().round();
            if n_alpha[i] != expected {
                staircase_misses += 1;
            }
            let binomial = fock_condensate_entropy::<f64>(expected as usize);
            formula_max = formula_max.max((s_an[i] - binomial).abs());
        }
        if conv[i] == 1.0 {
            ed_max = ed_max.max((s_an[i] - s_num[i]).abs());
        }
    }
    let unconverged = table.unconverged_rows();
    let boundaries = degen.iter().filter(|&&d| d == 1.0).count();
    let mut out = vec![
        Check::at_most("acc.1.normal_zero", "S = 0 on every normal-phase point", normal_max, 1e-10),
        Check::at_most(
            "acc.1.staircase",
            "n_alpha = round((w - omega)/2g) off the boundaries",
            staircase_misses as f64,
            0.0,
        )
        .with(format!("{boundaries} boundary points report the lower member")),
        Check::at_most("acc.1.binomial_entropy", "S_analytic is the binomial entropy of n_alpha", formula_max, 1e-12),
        Check::at_most("acc.1.ed_agreement", "|S_analytic - S_numeric| on converged points", ed_max, 1e-8)
            .with(format!("{} points", ratio.len())),
        Check::at_most("acc.1.converged", "unconverged phase-sweep points", unconverged as f64, 0.0),
    ];
    if level == Level::Full {
        out.push(
            Check::below("acc.1.runtime", "seconds for 201 points at auto cutoff", elapsed, PHASE_SWEEP_RUNTIME_LIMIT)
                .with(format!("{} workers", rayon::current_num_threads())),
        );
    }
    out
}

fn criterion_2(_: Level) -> Vec<Check> {
    let sets: Vec<(usize, f64)> = (0..20).map(|k| (1 + (29 * k) / 19, [0.01, 0.02, 0.05][k % 3])).collect();
    let results: Vec<Result<f64, String>> = sets
        .par_iter()
        .map(|&(n, g)| {
            let w = 1.0 + 2.0 * g * n as f64;
            let p = Params::new(1.0, w, g).map_err(|e| e.to_string())?;
            if classify_phase(&p).n_alpha() != n {
                return Err(format!("w = {w} does not sit on the n = {n} plateau"));
            }
            let ed = analyze_ground(&p, CutoffChoice::Auto).map_err(|e| e.to_string())?;
            Ok((ed.energy - ((1.0 - w) * n as f64 + g * (n * n) as f64)).abs())
        })
        .collect();
    match results.into_iter().collect::<Result<Vec<f64>, String>>() {
        Ok(d) => vec![Check::at_most(
            "acc.2.ground_energy",
            "|E_ED - ((omega - w) n + g n^2)| over 20 sets, n in [1, 30]",
            max_abs(d),
            1e-10,
        )],
        Err(e) => vec![failed("acc.2.ground_energy", "ground-energy formula", e)],
    }
}

pub const PERTURBATION_LAMBDAS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// |exact shift − perturbative shift| for the state the expansion starts from.
fn perturbation_residual(w: f64, lambda: f64) -> twomode_core::Result<f64> {
    let p = Params::new(1.0, w, 0.01)?.with_lambda(lambda)?;
    let class = classify_phase(&p);
    let h = build_sbf_hamiltonian(&p, TwoModeCutoff::square(class.n_alpha() + 40));
    let exact = match class.phase {
        Phase::DegenerateBoundary { lower } => {
            let c = h.cutoff();
            partitioned_shift(&h, &[c.index(lower, 0), c.index(lower + 1, 0)], class.ground_energy)?
        }
        _ => level_shift(&h, class.n_alpha(), 0)?,
    };
    Ok((exact - perturbative_energy_shift(&p).delta_e).abs())
}

fn criterion_3(_: Level) -> Vec<Check> {
    let mut out = Vec::new();
    let cases: [(&'static str, &'static str, f64, f64); 3] = [
        ("acc.3.normal_order", "residual exponent, normal phase (w = 0.5)", 0.5, 4.0),
        ("acc.3.condensate_order", "residual exponent, condensate n_alpha = 2 (w = 1.04)", 1.04, 4.0),
        ("acc.3.boundary_order", "residual exponent, degenerate boundary (w = 1.05)", 1.05, 2.0),
    ];
    for (id, desc, w, order) in cases {
        let r: Result<Vec<f64>, _> = PERTURBATION_LAMBDAS.iter().map(|&l| perturbation_residual(w, l)).collect();
        match r {
            Ok(r) => {
                let e = exponents(&r);
                let dev = max_abs(e.iter().map(|x| x - order));
                out.push(Check::at_most(id, desc, dev, 0.3).with(format!(
                    "|exponent - {order}|; residuals {:.3e} {:.3e} {:.3e}, exponents {:.3} {:.3}",
                    r[0], r[1], r[2], e[0], e[1]
                )));
            }
            Err(e) => out.push(failed(id, desc, e)),
        }
    }
    out
}

/// High-precision stationary amplitude at ω = 1, w = 2, g = 0.1, λ = 0.11.
pub const REFERENCE_NU: f64 = 2.179_976_222_307_879;

fn criterion_4(_: Level) -> Vec<Check> {
    let p = reference_point(0.3);
    let run = || -> twomode_core::Result<Vec<Check>> {
        let sol = stationary_amplitude(&p)?;
        let bogo = bogoliubov_params(&p, &sol)?;
        let qc = quadratic_check(&bogo, None)?;
        Ok(vec![
            Check::at_most("acc.4.cubic_residual", "stationarity residual of nu", sol.residual(&p), 1e-12),
            Check::at_most("acc.4.nu_reference", "|nu - high-precision root|", (sol.nu - REFERENCE_NU).abs(), 1e-12)
                .with(format!("nu = {:.10}", sol.nu)),
            Check::at_most("acc.4.gap", "|ED gap - epsilon|", (qc.gap - bogo.epsilon).abs(), 1e-8),
            Check::at_most(
                "acc.4.zero_point",
                "|ED ground energy - epsilon_0|",
                (qc.ground_energy - bogo.zero_point).abs(),
                1e-8,
            ),
            Check::at_most("acc.4.squeezed_overlap", "1 - |<ED|squeezed>|^2", 1.0 - qc.fidelity, 1e-8),
            Check::at_most(
                "acc.4.entropy",
                "|closed-form entropy - rotated ED entropy|",
                (squeezed_ground_entropy(bogo.theta) - qc.entropy).abs(),
                1e-6,
            ),
            Check::at_most("acc.4.converged", "unconverged quadratic ED", f64::from(u8::from(!qc.converged)), 0.0),
        ])
    };
    run().unwrap_or_else(|e| vec![failed("acc.4.mean_field", "mean-field chain at the reference point", e)])
}

/// Ratios at or below this count as deep in the normal phase.
pub const DEEP_NORMAL_RATIO: f64 = 0.6;

fn criterion_5(level: Level) -> Vec<Check> {
    let curve = |lambda: f64| {
        commands::sbf(&config(
            Command::Sbf,
            Overrides {
                lambda: Some(lambda),
                sweep: Some(ratio_sweep(level)),
                ..Overrides::default()
            },
        ))
    };
    let (weak, strong) = match (curve(0.1), curve(0.3)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return vec![failed("acc.5.curves", "mean-field entropy curves", e)],
    };
    let ratio = weak.column("ratio").expect("ratio");
    let sw = weak.column("S_mean_field").expect("entropy");
    let ss = strong.column("S_mean_field").expect("entropy");
    let min = sw.iter().chain(&ss).fold(f64::INFINITY, |m, &x| m.min(x));
    let deep = ratio
        .iter()
        .zip(sw.iter().zip(&ss))
        .filter(|(r, _)| **r <= DEEP_NORMAL_RATIO)
        .fold(0.0f64, |m, (_, (a, b))| m.max(*a).max(*b));
    // the rise: gain from the critical ratio to the end of the sweep
    let at = |s: &[f64], r: f64| {
        let i = ratio.iter().position(|&x| x >= r - 1e-12).expect("ratio in range");
        s[i]
    };
    let rise = (at(&sw, 1.5) - at(&sw, 1.0)).min(at(&ss, 1.5) - at(&ss, 1.0));
    let monotone_breaks = [&sw, &ss]
        .iter()
        .map(|s| {
            ratio
                .windows(2)
                .zip(s.windows(2))
                .filter(|(r, x)| r[0] >= 1.0 && x[1] < x[0])
                .count()
        })
        .sum::<usize>();
    let order_gap = ratio
        .iter()
        .zip(sw.iter().zip(&ss))
        .filter(|(r, _)| **r > 1.0)
        .fold(f64::INFINITY, |m, (_, (a, b))| m.min(a - b));
    vec![
        Check::at_least("acc.5.non_negative", "min S over both curves", min, 0.0),
        Check::below("acc.5.deep_normal", "max S for ratio <= 0.6", deep, 1e-3),
        Check::at_least("acc.5.rise", "S(ratio 1.5) - S(ratio 1.0), smaller of the two curves", rise, 0.0)
            .with(format!("{monotone_breaks} decreasing steps past the critical ratio")),
        Check::at_most("acc.5.rise_monotone", "decreasing steps past the critical ratio", monotone_breaks as f64, 0.0),
        Check::at_least(
            "acc.5.field_ordering",
            "min over ratio > 1 of S(lambda=0.1) - S(lambda=0.3)",
            order_gap,
            0.0,
        ),
        Check::at_most(
            "acc.5.converged",
            "unconverged mean-field sweep points",
            (weak.unconverged_rows() + strong.unconverged_rows()) as f64,
            0.0,
        ),
    ]
}

/// εt values at which the Fock oracle is compared with the Gaussian route.
pub const ORACLE_TIMES: [f64; 5] = [0.5, 1.0, PI / 2.0, 2.0, 3.0];

fn criterion_6(level: Level) -> Vec<Check> {
    let d = match Dynamics::new(&reference_point(0.5)) {
        Ok(d) => d,
        Err(e) => return vec![failed("acc.6.dynamics", "dynamics at the reference point", e)],
    };
    let d5 = Dynamics::new(&reference_point(5.0)).expect("same parameters");
    let period = d.period();
    let grid: Vec<f64> = (0..200).map(|i| 2.0 * period * i as f64 / 199.0).collect();
    let s = |d: &Dynamics<f64>, t: f64| d.entropy(t).unwrap_or(f64::NAN);
    let periodic = max_abs(grid.iter().map(|&t| s(&d, t) - s(&d, t + period)));
    let mismatched = grid.iter().filter(|&&t| s(&d, t).to_bits() != s(&d5, t).to_bits()).count();
    let mut out = vec![
        Check::at_most("acc.6.initial", "S(0)", s(&d, 0.0).abs(), 1e-12),
        Check::at_most("acc.6.period", "max |S(t) - S(t + pi/epsilon)|, 200 points", periodic, 1e-9),
        Check::at_most(
            "acc.6.nu_prime_invariance",
            "grid points where S differs bitwise for nu' = 0.5 and 5.0",
            mismatched as f64,
            0.0,
        ),
    ];
    let times: Vec<f64> = match level {
        Level::Quick => vec![PI / 2.0],
        Level::Full => ORACLE_TIMES.to_vec(),
    };
    let oracle_run = |cutoff: Option<usize>| -> twomode_core::Result<(usize, Vec<(f64, bool)>)> {
        let o = FockDynamicsOracle::new(&reference_point(0.3), cutoff)?;
        o.evolve(0.0)?;
        let v = times
            .par_iter()
            .map(|&et| o.sample(et / d.bogo.epsilon).map(|x| (x.entropy, x.converged())))
            .collect::<twomode_core::Result<Vec<_>>>()?;
        Ok((o.alpha_cutoff().n_max(), v))
    };
    match oracle_run(None) {
        Ok((n, base)) => {
            let diff = max_abs(times.iter().zip(&base).map(|(&et, (x, _))| x - s(&d, et / d.bogo.epsilon)));
            let unconverged = base.iter().filter(|(_, c)| !c).count();
            out.push(
                Check::at_most("acc.6.fock_oracle", "max |S_gaussian - S_fock| (nu' = 0.3)", diff, 1e-4)
                    .with(format!("{} times, alpha cutoff {n}, {unconverged} at the edge", times.len())),
            );
            if level == Level::Full {
                match oracle_run(Some(2 * n)) {
                    Ok((_, doubled)) => out.push(
                        Check::at_most(
                            "acc.6.cutoff_doubling",
                            "max change of S_fock when the cutoff doubles",
                            max_abs(base.iter().zip(&doubled).map(|(a, b)| a.0 - b.0)),
                            1e-6,
                        )
                        .with(format!("alpha cutoff {n} -> {}", 2 * n)),
                    ),
                    Err(e) => out.push(failed("acc.6.cutoff_doubling", "oracle at doubled cutoff", e)),
                }
            }
        }
        Err(e) => out.push(failed("acc.6.fock_oracle", "Fock propagation oracle", e)),
    }
    out
}

fn criterion_7(_: Level) -> Vec<Check> {
    let d = match Dynamics::new(&reference_point(0.3)) {
        Ok(d) => d,
        Err(e) => return vec![failed("acc.7.invariants", "canonical invariants", e)],
    };
    let t_max = 3.0 * d.period();
    let mut canonical: f64 = 0.0;
    let mut symplectic: f64 = 0.0;
    let mut margin = f64::INFINITY;
    let mut errors = 0usize;
    for i in 0..1000 {
        let c = d.coefficients(t_max * i as f64 / 999.0);
        canonical = canonical.max(c.canonical_residual().abs());
        match covariance_from_coefficients(&c, d.params.nu_prime) {
            Ok(g) => {
                if let Ok((lo, hi)) = g.symplectic_eigenvalues() {
                    symplectic = symplectic.max((lo - 0.5).abs()).max((hi - 0.5).abs());
                }
                margin = margin.min(g.uncertainty_margin().unwrap_or(f64::NEG_INFINITY));
            }
            Err(_) => errors += 1,
        }
    }
    vec![
        Check::at_most("acc.7.canonical", "max ||f|^2 - |f'|^2 - 1|, 1000 times", canonical, 1e-12),
        Check::at_most("acc.7.symplectic", "max |nu_k - 1/2| of the full covariance", symplectic, 1e-10),
        Check::at_least("acc.7.uncertainty", "min eigenvalue of sigma + i Omega/2", margin, -1e-9)
            .with(format!("{errors} covariances rejected")),
    ]
}

/// Regression bound on the short-time spread, frozen from the first run
/// (measured 0.0518834).
pub const SHORT_TIME_SPREAD_BOUND: f64 = 0.052;

fn criterion_8(_: Level) -> Vec<Check> {
    let base = reference_point(0.3);
    let eps = match Dynamics::new(&base) {
        Ok(d) => d.bogo.epsilon,
        Err(e) => return vec![failed("acc.8.sensitivity", "short-time sensitivity", e)],
    };
    let times: Vec<f64> = (0..=480).map(|i| 1.2 / eps * i as f64 / 480.0).collect();
    match short_time_sbf_sensitivity(&base, &[0.05, 0.11], &times) {
        Ok(r) => vec![
            Check::below(
                "acc.8.short_below_window",
                "short-time spread (eps t < 0.3) minus spread at eps t in [0.8, 1.2]",
                r.short_time_spread - r.late_window_spread,
                0.0,
            )
            .with(format!(
                "short {:.5}, window {:.5}",
                r.short_time_spread, r.late_window_spread
            )),
            Check::at_most(
                "acc.8.short_spread_bound",
                "short-time relative spread over lambda in {0.05, 0.11}",
                r.short_time_spread,
                SHORT_TIME_SPREAD_BOUND,
            ),
        ],
        Err(e) => vec![failed("acc.8.sensitivity", "short-time sensitivity", e)],
    }
}

// ------------------------------------------------------------- invariants

/// Deterministic, irregular two-mode state.
fn probe_state(k: usize, n1: usize, n2: usize) -> PureState<f64> {
    let cut = TwoModeCutoff::new(
        twomode_core::fock::FockCutoff::new(n1),
        twomode_core::fock::FockCutoff::new(n2),
    );
    let amps = nalgebra::DVector::from_fn(cut.dim(), |i, _| {
        let x = (i + 1) as f64 * (k + 1) as f64;
        nalgebra::Complex::new((1.7 * x).sin() + 0.3, (0.9 * x + 0.4).cos())
    });
    PureState::new(cut, amps).expect("nonzero")
}

fn fock_invariants(_: Level) -> Vec<Check> {
    let mut out = Vec::new();
    let p = Params::new(1.0, 1.3, 0.02).and_then(|p| p.with_lambda(0.2)).expect("valid");
    let cut = TwoModeCutoff::square(20);
    let herm = [
        build_hamiltonian_ab(&p, cut),
        build_hamiltonian_alphabeta(&p, cut),
        build_sbf_hamiltonian(&p, cut),
    ]
    .iter()
    .map(|h| h.hermiticity_deviation() / h.frobenius_norm())
    .fold(0.0f64, f64::max);
    out.push(Check::at_most("fock.hermiticity", "||H - H^dag|| / ||H|| over all builders", herm, 1e-12));

    match analyze_ground(&Params::new(1.0, 1.303, 0.01).expect("valid"), CutoffChoice::Auto) {
        Ok(g) => out.push(
            Check::at_most(
                "fock.cutoff_convergence",
                "energy and entropy change under the +10 recheck",
                g.energy_change.max(g.entropy_change),
                1e-8,
            )
            .with(format!("n_max {}", g.n_max)),
        ),
        Err(e) => out.push(failed("fock.cutoff_convergence", "cutoff recheck", e)),
    }

    let mut schmidt: f64 = 0.0;
    for k in 0..100 {
        let psi = probe_state(k, 1 + k % 5, 1 + (k / 5) % 6);
        let s = schmidt_entropy(&psi);
        for keep in [Mode::First, Mode::Second] {
            let v = von_neumann_entropy(&partial_trace(&psi, keep)).unwrap_or(f64::NAN);
            schmidt = schmidt.max((v - s).abs());
        }
    }
    out.push(Check::at_most(
        "fock.schmidt_partial_trace",
        "|Schmidt entropy - entropy of partial trace|, 100 states",
        schmidt,
        1e-10,
    ));

    let h = build_sbf_hamiltonian(&p, TwoModeCutoff::square(12));
    let psi = probe_state(7, 12, 12);
    let e0 = h.expectation(&psi).re;
    let mut norm: f64 = 0.0;
    let mut energy: f64 = 0.0;
    for t in [0.3, 1.0, 7.5, 40.0] {
        match propagate(&h, &psi, t) {
            Ok(phi) => {
                norm = norm.max((phi.amplitudes().norm() - 1.0).abs());
                energy = energy.max((h.expectation(&phi).re - e0).abs() / e0.abs().max(1.0));
            }
            Err(_) => norm = f64::NAN,
        }
    }
    out.push(Check::at_most("fock.propagate_norm", "norm drift under propagation", norm, 1e-10));
    out.push(Check::at_most("fock.propagate_energy", "relative energy drift under propagation", energy, 1e-8));
    out
}

fn model_invariants(_: Level) -> Vec<Check> {
    let mut out = Vec::new();
    let p = Params::new(1.0, 1.2, 0.02).expect("valid");
    let cut = TwoModeCutoff::square(30);
    let opts = SolverOptions::default();
    match (
        lowest_energies(&build_hamiltonian_ab(&p, cut), 10, &opts),
        lowest_energies(&build_hamiltonian_alphabeta(&p, cut), 10, &opts),
    ) {
        (Ok(a), Ok(b)) => out.push(Check::at_most(
            "model.unitary_equivalence",
            "lowest 10 levels, (a, b) versus (alpha, beta) builders",
            max_abs(a.iter().zip(&b).map(|(x, y)| x - y)),
            1e-9,
        )),
        (Err(e), _) | (_, Err(e)) => out.push(failed("model.unitary_equivalence", "builder spectra", e)),
    }

    let mut oracle: f64 = 0.0;
    for n in 0..=12 {
        let psi = PureState::<f64>::basis(TwoModeCutoff::square(n), n, 0);
        let s = entanglement_entropy(&rotate_modes(&psi, Rotation::AlphaBetaToAb)).unwrap_or(f64::NAN);
        oracle = oracle.max((s - fock_condensate_entropy::<f64>(n)).abs());
    }
    out.push(Check::at_most(
        "model.condensate_entropy_oracle",
        "binomial entropy versus rotated Fock state, n in [0, 12]",
        oracle,
        1e-10,
    ));

    let steps = (0..400)
        .map(|n| fock_condensate_entropy::<f64>(n + 1) - fock_condensate_entropy::<f64>(n))
        .fold(f64::INFINITY, f64::min);
    out.push(Check::at_least(
        "model.entropy_monotone",
        "min S(n + 1) - S(n), n < 400 (must be > 0)",
        steps,
        f64::MIN_POSITIVE,
    ));

    match analyze_ground(&Params::new(1.0, 0.7, 0.01).expect("valid"), CutoffChoice::Auto) {
        Ok(g) => out.push(Check::at_most(
            "model.normal_vacuum",
            "|E| and S of the normal-phase ED ground state",
            g.energy.abs().max(g.entropy.abs()),
            1e-10,
        )),
        Err(e) => out.push(failed("model.normal_vacuum", "normal ground state", e)),
    }

    let bounded: Result<Vec<f64>, _> = [2e-3, 1e-3, 5e-4, 2.5e-4]
        .iter()
        .map(|&l| perturbation_residual(1.04, l).map(|r| r / l.powi(4)))
        .collect();
    match bounded {
        Ok(r) => {
            let spread = r.iter().cloned().fold(0.0, f64::max) / r.iter().cloned().fold(f64::INFINITY, f64::min);
            out.push(
                Check::at_most("model.perturbative_bounded", "max/min of residual/lambda^4 as lambda halves", spread, 2.0)
                    .with(format!("residual/lambda^4 = {:.4e} .. {:.4e}", r[0], r[3])),
            );
        }
        Err(e) => out.push(failed("model.perturbative_bounded", "perturbative residual", e)),
    }
    out
}

fn mean_field_invariants(_: Level) -> Vec<Check> {
    let mut out = Vec::new();
    // root selection over a parameter grid
    let mut worst_residual: f64 = 0.0;
    let mut not_minimal = 0usize;
    for i in 0..12 {
        for j in 0..8 {
            let w = 0.4 + 0.2 * i as f64;
            let lambda = 0.005 * (1 << j) as f64;
            let p = Params::new(1.0, w, 0.05).and_then(|p| p.with_lambda(lambda)).expect("valid");
            match stationary_amplitude(&p) {
                Ok(s) => {
                    worst_residual = worst_residual.max(s.residual(&p));
                    if s.all_real_roots.iter().any(|&r| mean_field_energy(&p, r) < s.e0 - 1e-12) {
                        not_minimal += 1;
                    }
                }
                Err(_) => not_minimal += 1,
            }
        }
    }
    out.push(Check::at_most("mf.cubic_residual", "max stationarity residual, 96 parameter sets", worst_residual, 1e-12));
    out.push(Check::at_most("mf.global_minimum", "sets where another root has lower energy", not_minimal as f64, 0.0));

    let amp = |w: f64, l: f64| {
        Params::new(1.0, w, 0.1)
            .and_then(|p| p.with_lambda(l))
            .and_then(|p| stationary_amplitude(&p))
            .map(|s| s.nu)
            .unwrap_or(f64::NAN)
    };
    let lambdas = [1e-2, 5e-3, 2.5e-3];
    let nu_star = ((2.0 - 1.0 - 0.1) / 0.2f64).sqrt();
    let sf: Vec<f64> = lambdas
        .iter()
        .map(|&l| (amp(2.0, l) - nu_star - l / (0.4 * nu_star * nu_star)).abs())
        .collect();
    out.push(
        Check::at_most(
            "mf.superfluid_asymptotics",
            "|exponent - 2| of nu - nu* - lambda/(4 g nu*^2)",
            max_abs(exponents(&sf).iter().map(|e| e - 2.0)),
            0.3,
        )
        .with(format!("w = 2, g = 0.1, lambda = {lambdas:?}")),
    );
    let nm: Vec<f64> = lambdas.iter().map(|&l| (amp(0.5, l) - l / 0.6).abs()).collect();
    out.push(
        Check::at_most(
            "mf.normal_asymptotics",
            "|exponent - 3| of nu - lambda/(omega - w + g)",
            max_abs(exponents(&nm).iter().map(|e| e - 3.0)),
            0.3,
        )
        .with("w = 0.5, g = 0.1".into()),
    );

    // Bogoliubov spectrum and entropy against ED away from the figure point
    let p = Params::new(1.0, 1.5, 0.05).and_then(|p| p.with_lambda(0.2)).expect("valid");
    let chain = || -> twomode_core::Result<(f64, f64)> {
        let s = stationary_amplitude(&p)?;
        let b = bogoliubov_params(&p, &s)?;
        let q = quadratic_check(&b, None)?;
        Ok((
            (q.gap - b.epsilon).abs().max((q.ground_energy - b.zero_point).abs()),
            (q.entropy - squeezed_ground_entropy(b.theta)).abs(),
        ))
    };
    match chain() {
        Ok((spec, ent)) => {
            out.push(Check::at_most("mf.bogoliubov_ed", "|ED gap - epsilon|, |ED E0 - epsilon_0|", spec, 1e-8));
            out.push(Check::at_most("mf.entropy_oracle", "|closed-form - rotated ED entropy|", ent, 1e-6));
        }
        Err(e) => out.push(failed("mf.bogoliubov_ed", "quadratic ED", e)),
    }

    let flag = |l: f64| {
        let p = reference_point(0.3).with_lambda(l).expect("valid");
        let s = stationary_amplitude(&p).expect("solvable");
        weak_coupling_report(&p, &bogoliubov_params(&p, &s).expect("positive field")).flagged()
    };
    let wrong = [(0.11, false), (0.05, true), (0.5, false)]
        .iter()
        .filter(|(l, want)| flag(*l) != *want)
        .count();
    out.push(
        Check::at_most("mf.weak_coupling_flag", "misflagged cases of g < lambda", wrong as f64, 0.0)
            .with("g = 0.1, lambda in {0.11, 0.05, 0.5}".into()),
    );
    out
}

fn dynamics_invariants(_: Level) -> Vec<Check> {
    let mut out = Vec::new();
    let d = Dynamics::new(&reference_point(0.3)).expect("reference parameters");
    let grid: Vec<f64> = (0..500).map(|i| 0.1 * i as f64).collect();
    let neg = grid
        .iter()
        .map(|&t| d.entropy(t).unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    out.push(Check::at_least("dyn.entropy_non_negative", "min S(t) on a grid", neg, 0.0));
    let other = Dynamics::new(&reference_point(1.7)).expect("valid");
    let nu_dev = max_abs(grid.iter().map(|&t| d.entropy(t).unwrap_or(f64::NAN) - other.entropy(t).unwrap_or(0.0)));
    out.push(Check::at_most("dyn.nu_prime_invariance", "max |S(t; 0.3) - S(t; 1.7)|", nu_dev, 1e-12));
    let mut flat = d.bogo;
    flat.theta = 0.0;
    let theta0 = max_abs(grid.iter().map(|&t| {
        covariance_from_coefficients(&heisenberg_coefficients(&flat, d.solution.nu, t), 0.3)
            .map(|g| g.entanglement_entropy())
            .unwrap_or(f64::NAN)
    }));
    out.push(Check::at_most("dyn.theta_zero", "max S(t) with theta = 0", theta0, 1e-14));
    out
}

fn cli_invariants(_: Level) -> Vec<Check> {
    let cfg = config(
        Command::Sbf,
        Overrides {
            sweep: Some("ratio:0.8:1.4:13".parse().expect("valid sweep")),
            cutoff: Some(CutoffSpec::AUTO),
            ..Overrides::default()
        },
    );
    let render = |jobs: usize| -> Option<(String, Table)> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().ok()?;
        let t = pool.install(|| commands::sbf(&cfg)).ok()?;
        Some((render_csv(&cfg, &t), t))
    };
    match (render(1), render(3)) {
        (Some((a, t)), Some((b, _))) => {
            let has_flag = t.columns.contains(&"converged");
            vec![
                Check::at_most("cli.determinism", "differing bytes between 1 and 3 workers", f64::from(u8::from(a != b)), 0.0),
                Check::at_most(
                    "cli.convergence_flags",
                    "ED-backed tables without a convergence column",
                    f64::from(u8::from(!has_flag)),
                    0.0,
                ),
            ]
        }
        _ => vec![failed("cli.determinism", "repeatable output", "sweep failed")],
    }
}
