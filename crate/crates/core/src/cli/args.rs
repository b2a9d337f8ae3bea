use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "tremor", version, about = "Stochastic electron model workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, display_order = 100)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH", display_order = 101)]
    pub out: Option<PathBuf>,

    /// Leave the wall-clock timestamp out of the report.
    #[arg(long, global = true, display_order = 102)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vacuum kinetic energy integral against its closed form.
    Zpf(ZpfArgs),
    /// Gaussian charge cloud: density, self-potential and self-energy.
    Cloud(CloudArgs),
    /// Diffusion ensemble of the trembling motion with velocity estimators.
    Simulate(SimulateArgs),
    /// Uncertainty-relation minimization for hydrogen-like ground states.
    Variational(VariationalArgs),
    /// Angular-momentum dispersion tables.
    Angular(AngularArgs),
    /// Full check suite with a consolidated pass/fail table.
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zpf(_) => "zpf",
            Command::Cloud(_) => "cloud",
            Command::Simulate(_) => "simulate",
            Command::Variational(_) => "variational",
            Command::Angular(_) => "angular",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct QuadratureArgs {
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-14, value_parser = positive)]
    pub abs_tol: f64,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-12, value_parser = positive)]
    pub rel_tol: f64,
    /// Maximum bisection depth of the adaptive quadrature.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..=60))]
    pub max_depth: u32,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ZpfArgs {
    /// Lower angular-frequency cutoff (atomic units).
    #[arg(long, default_value_t = 0.0, value_parser = nonnegative)]
    pub omega_min: f64,
    /// Upper cutoff; defaults to 2mC²/ħ.
    #[arg(long, value_parser = positive)]
    pub omega_max: Option<f64>,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct CloudArgs {
    /// Number of radii in the emitted profile.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..=100_000))]
    pub points: u64,
    /// Smallest profile radius in units of λ_o.
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub r_min: f64,
    /// Largest profile radius in units of λ_o.
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    pub r_max: f64,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateArg {
    Hydrogen,
    Harmonic,
    PlaneWave,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct SimulateArgs {
    /// Analytic state driving the drift.
    #[arg(long, value_enum, default_value_t = StateArg::Hydrogen)]
    pub state: StateArg,
    /// Nuclear charge of the hydrogen-like state.
    #[arg(long = "Z", visible_alias = "z", default_value_t = 1.0, value_parser = positive)]
    pub z: f64,
    /// Oscillator angular frequency.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub omega: f64,
    /// Oscillator dimension (1 or 3).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dims: u8,
    /// Plane-wave number.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    /// Number of independent paths.
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub paths: u64,
    /// Recorded steps after burn-in.
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    /// Euler-Maruyama time step (ħ/hartree).
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    pub dt: f64,
    /// Unrecorded steps before the first record.
    #[arg(long, default_value_t = 0)]
    pub burn_in: u64,
    /// Store every n-th step; must divide --steps.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: u64,
    /// Master seed; TREMOR_SEED overrides the default.
    #[arg(long, env = "TREMOR_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Histogram and estimator bins.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..=10_000))]
    pub bins: u64,
    /// Estimator lag in records.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub lag: u64,
    /// Multiplier on the diffusion coefficient ħ/2m.
    #[arg(long, default_value_t = 1.0, value_parser = nonnegative)]
    pub diffusion_scale: f64,
    /// Worker threads; results do not depend on it.
    #[serde(skip)]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct VariationalArgs {
    /// Nuclear charge (>= 1).
    #[arg(long = "Z", visible_alias = "z", default_value_t = 1.0, value_parser = at_least_one)]
    pub z: f64,
    /// Points of the energy curve E(r) to emit (0 for none).
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=100_000))]
    pub curve_points: u64,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct AngularArgs {
    /// Largest l in the table.
    #[arg(long, visible_alias = "l", default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=100_000))]
    pub l_max: u32,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ReportArgs {
    /// Hydrogen ensemble size; the other ensembles scale with it.
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..=10_000_000))]
    pub paths: u64,
    /// Master seed; the sub-checks derive theirs from it.
    #[arg(long, env = "TREMOR_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Hydrogen burn-in steps.
    #[arg(long, default_value_t = 50_000)]
    pub burn_in: u64,
    /// Worker threads; results do not depend on it.
    #[serde(skip)]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    parse_f64(s).and_then(|v| if v > 0.0 { Ok(v) } else { Err("must be > 0".into()) })
}

fn nonnegative(s: &str) -> Result<f64, String> {
    parse_f64(s).and_then(|v| if v >= 0.0 { Ok(v) } else { Err("must be >= 0".into()) })
}

fn at_least_one(s: &str) -> Result<f64, String> {
    parse_f64(s).and_then(|v| if v >= 1.0 { Ok(v) } else { Err("must be >= 1".into()) })
}
