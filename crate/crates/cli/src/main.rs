use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twomode_cli::commands;
use twomode_cli::config::{CutoffSpec, Format, SweepSpec};
use twomode_cli::output::{emit, plot_script, render_csv};
use twomode_cli::validate::{self, Level};
use twomode_cli::{with_jobs, CliError, CliResult, Command, FileConfig, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "twomode", version, about = "Two-mode Kerr photon model: ground-state entanglement, squeezing and dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Zero-field entanglement staircase versus w/(ω + g).
    Phase(RunArgs),
    /// Squeezed-ground-state entropy with a symmetry-breaking field.
    Sbf(RunArgs),
    /// Entropy of the evolving coherent state.
    Dynamics(RunArgs),
    /// Runs the validation suite.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with [model], [sweep] and [output] tables.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "nu-prime")]
    nu_prime: Option<f64>,
    /// Single-mode n_max or "auto".
    #[arg(long)]
    cutoff: Option<CutoffSpec>,
    /// name:start:stop:points with name in omega, w, g, lambda, nu_prime, ratio, t.
    #[arg(long)]
    sweep: Option<SweepSpec>,
    #[arg(long = "time-max")]
    time_max: Option<f64>,
    #[arg(long = "time-points")]
    time_points: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "TWOMODE_JOBS")]
    jobs: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Also propagate in truncated Fock space (dynamics only).
    #[arg(long = "with-fock-oracle")]
    with_fock_oracle: bool,
    /// Write a matplotlib script that plots the output file.
    #[arg(long = "plot-script", value_name = "PATH")]
    plot_script: Option<PathBuf>,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: Level,
    /// JSON report destination.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long, env = "TWOMODE_JOBS")]
    jobs: Option<usize>,
}

fn run_sweep(command: Command, a: RunArgs) -> CliResult<()> {
    let file = match &a.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let overrides = Overrides {
        omega: a.omega,
        w: a.w,
        g: a.g,
        lambda: a.lambda,
        nu_prime: a.nu_prime,
        cutoff: a.cutoff,
        sweep: a.sweep,
        time_max: a.time_max,
        time_points: a.time_points,
        jobs: a.jobs,
        with_fock_oracle: a.with_fock_oracle,
        out: a.out,
        format: a.format.map(|FormatArg::Csv| Format::Csv),
        plot_script: a.plot_script,
        bits: a.bits,
    };
    let cfg = RunConfig::resolve(command, &file, &overrides)?;
    let table = with_jobs(cfg.jobs, || commands::run(&cfg))??;
    emit(cfg.out.as_deref(), &render_csv(&cfg, &table))?;
    if let Some(script) = &cfg.plot_script {
        let data = cfg
            .out
            .as_deref()
            .ok_or_else(|| CliError::Config("--plot-script needs --out".into()))?;
        emit(Some(script), &plot_script(data, &table))?;
    }
    let bad = table.unconverged_rows();
    if bad > 0 {
        return Err(CliError::NonConvergence(format!(
            "{bad} of {} rows did not pass the cutoff recheck",
            table.rows.len()
        )));
    }
    Ok(())
}

fn run_validate(a: ValidateArgs) -> CliResult<()> {
    let report = with_jobs(a.jobs, || validate::run(a.level))?;
    for c in &report.checks {
        println!("{}", c.line());
    }
    if let Some(path) = &a.report {
        emit(Some(path), &report.to_json())?;
    }
    let failed = report.failed();
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} of {} checks failed", report.checks.len())));
    }
    println!("all {} checks passed", report.checks.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Sub::Phase(a) => run_sweep(Command::Phase, a),
        Sub::Sbf(a) => run_sweep(Command::Sbf, a),
        Sub::Dynamics(a) => run_sweep(Command::Dynamics, a),
        Sub::Validate(a) => run_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twomode: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
