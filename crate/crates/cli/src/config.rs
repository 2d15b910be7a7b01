use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use twomode_core::model::CutoffChoice;
use twomode_core::Params;

use crate::error::{CliError, CliResult};

/// Which figure a run reproduces; decides the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Phase,
    Sbf,
    Dynamics,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Phase => "phase",
            Command::Sbf => "sbf",
            Command::Dynamics => "dynamics",
        })
    }
}

/// `auto` or an explicit single-mode n_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutoffSpec {
    Fixed(usize),
    Named(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl CutoffSpec {
    pub const AUTO: Self = CutoffSpec::Named(AutoTag::Auto);

    pub fn choice(self) -> CutoffChoice {
        match self {
            CutoffSpec::Fixed(n) => CutoffChoice::Fixed(n),
            CutoffSpec::Named(AutoTag::Auto) => CutoffChoice::Auto,
        }
    }

    pub fn fixed(self) -> Option<usize> {
        match self {
            CutoffSpec::Fixed(n) => Some(n),
            CutoffSpec::Named(_) => None,
        }
    }
}

impl FromStr for CutoffSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(CutoffSpec::AUTO);
        }
        s.parse::<usize>()
            .map(CutoffSpec::Fixed)
            .map_err(|_| format!("cutoff must be a non-negative integer or \"auto\", got {s:?}"))
    }
}

/// Sweepable quantities. `ratio` is w/(ω + g) and sets w.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Omega,
    W,
    G,
    Lambda,
    NuPrime,
    Ratio,
    T,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Omega => "omega",
            Axis::W => "w",
            Axis::G => "g",
            Axis::Lambda => "lambda",
            Axis::NuPrime => "nu_prime",
            Axis::Ratio => "ratio",
            Axis::T => "t",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "omega" => Axis::Omega,
            "w" => Axis::W,
            "g" => Axis::G,
            "lambda" => Axis::Lambda,
            "nu_prime" | "nu-prime" => Axis::NuPrime,
            "ratio" => Axis::Ratio,
            "t" => Axis::T,
            _ => return None,
        })
    }

    /// Sets this coordinate on `base`; `t` is not a model parameter.
    pub fn apply(self, base: &Params, value: f64) -> Params {
        let mut p = *base;
        match self {
            Axis::Omega => p.omega = value,
            Axis::W => p.w = value,
            Axis::G => p.g = value,
            Axis::Lambda => p.lambda = value,
            Axis::NuPrime => p.nu_prime = value,
            Axis::Ratio => p.w = value * (p.omega + p.g),
            Axis::T => {}
        }
        p
    }
}

/// `name:start:stop:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    /// Evenly spaced values with both end points exact.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("sweep must look like name:start:stop:points, got {s:?}"));
        }
        let axis = Axis::parse(parts[0].trim()).ok_or_else(|| {
            format!(
                "unknown sweep parameter {:?}; expected one of omega, w, g, lambda, nu_prime, ratio, t",
                parts[0]
            )
        })?;
        let num = |i: usize, what: &str| -> Result<f64, String> {
            let x: f64 = parts[i]
                .trim()
                .parse()
                .map_err(|_| format!("sweep {what} {:?} is not a number", parts[i]))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("sweep {what} must be finite"))
            }
        };
        let start = num(1, "start")?;
        let stop = num(2, "stop")?;
        let points: usize = parts[3]
            .trim()
            .parse()
            .map_err(|_| format!("sweep points {:?} is not a positive integer", parts[3]))?;
        if points < 2 {
            return Err(format!("a sweep needs at least 2 points, got {points}"));
        }
        Ok(SweepSpec {
            axis,
            start,
            stop,
            points,
        })
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.axis.name(), self.start, self.stop, self.points)
    }
}

impl Serialize for SweepSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SweepSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
}

/// Contents of a config file; everything optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ModelSection {
    pub omega: Option<f64>,
    pub w: Option<f64>,
    pub g: Option<f64>,
    pub lambda: Option<f64>,
    pub nu_prime: Option<f64>,
    pub cutoff: Option<CutoffSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepSection {
    pub sweep: Option<SweepSpec>,
    pub time_max: Option<f64>,
    pub time_points: Option<usize>,
    pub jobs: Option<usize>,
    pub with_fock_oracle: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OutputSection {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot_script: Option<PathBuf>,
    pub bits: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Values given on the command line; they override the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub w: Option<f64>,
    pub g: Option<f64>,
    pub lambda: Option<f64>,
    pub nu_prime: Option<f64>,
    pub cutoff: Option<CutoffSpec>,
    pub sweep: Option<SweepSpec>,
    pub time_max: Option<f64>,
    pub time_points: Option<usize>,
    pub jobs: Option<usize>,
    pub with_fock_oracle: bool,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot_script: Option<PathBuf>,
    pub bits: bool,
}

/// Fully resolved run description. Its TOML form is what gets hashed into
/// the CSV provenance, so it only holds things that affect the numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: Command,
    pub omega: f64,
    pub w: f64,
    pub g: f64,
    pub lambda: f64,
    pub nu_prime: f64,
    pub cutoff: CutoffSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_points: Option<usize>,
    pub with_fock_oracle: bool,
    pub bits: bool,
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub plot_script: Option<PathBuf>,
}

/// Number of points used when no time grid is given.
pub const DEFAULT_TIME_POINTS: usize = 301;

impl RunConfig {
    pub fn resolve(command: Command, file: &FileConfig, cli: &Overrides) -> CliResult<Self> {
        let m = &file.model;
        let s = &file.sweep;
        let o = &file.output;
        let (omega, w, g, lambda, nu_prime, sweep) = match command {
            Command::Phase => (1.0, 1.0, 0.01, 0.0, 0.3, Some("ratio:0.5:1.5:201")),
            Command::Sbf => (1.0, 1.0, 0.01, 0.1, 0.3, Some("ratio:0.5:1.5:201")),
            Command::Dynamics => (1.0, 2.0, 0.1, 0.11, 0.3, None),
        };
        let default_sweep = sweep.map(|x| x.parse::<SweepSpec>().expect("built-in sweep parses"));
        let cfg = RunConfig {
            command,
            omega: cli.omega.or(m.omega).unwrap_or(omega),
            w: cli.w.or(m.w).unwrap_or(w),
            g: cli.g.or(m.g).unwrap_or(g),
            lambda: cli.lambda.or(m.lambda).unwrap_or(lambda),
            nu_prime: cli.nu_prime.or(m.nu_prime).unwrap_or(nu_prime),
            cutoff: cli.cutoff.or(m.cutoff).unwrap_or(CutoffSpec::AUTO),
            sweep: cli.sweep.or(s.sweep).or(default_sweep),
            time_max: cli.time_max.or(s.time_max),
            time_points: cli.time_points.or(s.time_points),
            with_fock_oracle: cli.with_fock_oracle || s.with_fock_oracle.unwrap_or(false),
            bits: cli.bits || o.bits.unwrap_or(false),
            jobs: cli.jobs.or(s.jobs),
            out: cli.out.clone().or_else(|| o.out.clone()),
            plot_script: cli.plot_script.clone().or_else(|| o.plot_script.clone()),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        for (name, x) in [
            ("omega", self.omega),
            ("w", self.w),
            ("g", self.g),
            ("lambda", self.lambda),
            ("nu-prime", self.nu_prime),
        ] {
            if !x.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        self.params()?;
        if let Some(sw) = &self.sweep {
            let time_axis = sw.axis == Axis::T;
            match (self.command, time_axis) {
                (Command::Dynamics, false) => {
                    return bad(format!("dynamics sweeps time only (t:start:stop:points), got {}", sw.axis.name()))
                }
                (Command::Phase | Command::Sbf, true) => {
                    return bad(format!("{} cannot sweep t", self.command));
                }
                _ => {}
            }
            if time_axis && (self.time_max.is_some() || self.time_points.is_some()) {
                return bad("give either a t sweep or time-max/time-points, not both".into());
            }
        }
        if self.command == Command::Phase && self.lambda != 0.0 {
            return bad("phase reproduces the zero-field ground state; lambda must be 0 (use sbf)".into());
        }
        if self.command == Command::Phase && self.sweep.map(|s| s.axis) == Some(Axis::Lambda) {
            return bad("phase cannot sweep lambda".into());
        }
        if let Some(t) = self.time_max {
            if !(t.is_finite() && t >= 0.0) {
                return bad(format!("time-max must be finite and non-negative, got {t}"));
            }
        }
        if let Some(n) = self.time_points {
            if n < 2 {
                return bad(format!("time-points must be at least 2, got {n}"));
            }
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if self.with_fock_oracle && self.command != Command::Dynamics {
            return bad("--with-fock-oracle only applies to dynamics".into());
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<Params> {
        Ok(Params::new(self.omega, self.w, self.g)?
            .with_lambda(self.lambda)?
            .with_nu_prime(self.nu_prime)?)
    }

    /// Canonical TOML of the resolved configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}
