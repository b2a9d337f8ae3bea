//! Euler–Maruyama ensembles of the trembling motion.
//!
//! Each path solves `dX = v₊(X) dt + √(2ν) dW` with `ν = ħ/(2m)` (optionally
//! rescaled), starting from an exact Born-law sample. Path `i` draws every
//! random number from substream `i` of the master seed, so the ensemble is
//! bit-identical for any number of worker threads.

use serde::{Deserialize, Serialize};

use super::state::{hydrogen_radial_cdf, StateKind, WaveState};
use super::KinematicsError;
use crate::numerics::{ks_statistic_unsorted, RandomStream, StreamRng};

/// Largest admissible `dt · drift_rate`.
pub const MAX_STEP_RATE: f64 = 0.1;
/// Radius (in units of a₀/Z) below which hydrogen paths are reflected.
pub const HYDROGEN_FLOOR: f64 = 1e-4;
/// Default cap on `n_paths · (burn_in_steps + n_steps)`.
pub const DEFAULT_STEP_BUDGET: u64 = 5_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub burn_in_steps: usize,
    pub master_seed: u64,
    /// Positions are stored every `record_stride` steps after burn-in.
    pub record_stride: usize,
    /// Multiplier on the diffusion coefficient ν = ħ/2m (1 = physical).
    pub diffusion_scale: f64,
    pub step_budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n_paths: 1000,
            n_steps: 1000,
            dt: 1e-3,
            burn_in_steps: 0,
            master_seed: 0,
            record_stride: 1,
            diffusion_scale: 1.0,
            step_budget: DEFAULT_STEP_BUDGET,
            workers: None,
        }
    }
}

impl SimulationConfig {
    pub fn n_records(&self) -> usize {
        self.n_steps / self.record_stride + 1
    }

    fn validate(&self, state: &WaveState) -> Result<(), KinematicsError> {
        let bad = |name: &'static str, value: f64| KinematicsError::InvalidParameter { name, value };
        if self.n_paths == 0 {
            return Err(bad("n_paths", 0.0));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(bad("dt", self.dt));
        }
        if self.record_stride == 0 || !self.n_steps.is_multiple_of(self.record_stride) {
            return Err(bad("record_stride", self.record_stride as f64));
        }
        if !(self.diffusion_scale.is_finite() && self.diffusion_scale >= 0.0) {
            return Err(bad("diffusion_scale", self.diffusion_scale));
        }
        if self.workers == Some(0) {
            return Err(bad("workers", 0.0));
        }
        let rate = self.dt * state.drift_rate();
        if rate >= MAX_STEP_RATE {
            return Err(KinematicsError::StepTooLarge {
                dt: self.dt,
                limit: MAX_STEP_RATE / state.drift_rate(),
            });
        }
        let steps = (self.n_paths as u128) * ((self.burn_in_steps + self.n_steps) as u128);
        if steps > self.step_budget as u128 {
            return Err(KinematicsError::BudgetExceeded {
                requested: steps.min(u64::MAX as u128) as u64,
                budget: self.step_budget,
            });
        }
        Ok(())
    }
}

/// Recorded paths, laid out `[path][record][coordinate]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryEnsemble {
    pub state: WaveState,
    pub config: SimulationConfig,
    dimensions: usize,
    positions: Vec<f64>,
}

impl TrajectoryEnsemble {
    pub fn n_paths(&self) -> usize {
        self.config.n_paths
    }

    pub fn n_records(&self) -> usize {
        self.config.n_records()
    }

    pub fn dimensions(&self) -> usize {
        self.dimensions
    }

    pub fn dt(&self) -> f64 {
        self.config.dt
    }

    /// Time between consecutive records.
    pub fn record_interval(&self) -> f64 {
        self.config.dt * self.config.record_stride as f64
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn path(&self, path: usize) -> &[f64] {
        let len = self.n_records() * self.dimensions;
        &self.positions[path * len..(path + 1) * len]
    }

    pub fn position(&self, path: usize, record: usize) -> &[f64] {
        let d = self.dimensions;
        &self.path(path)[record * d..(record + 1) * d]
    }

    /// Statistic coordinate of every path at `record`: x in 1D, |x| in 3D.
    pub fn coordinate_samples(&self, record: usize) -> Vec<f64> {
        (0..self.n_paths())
            .map(|p| coordinate(self.position(p, record)))
            .collect()
    }

    /// KS distance to the Born law at every record.
    pub fn ks_by_record(&self) -> Result<Vec<f64>, KinematicsError> {
        if self.state.born_cdf(0.0).is_none() {
            return Err(KinematicsError::NotNormalizable);
        }
        (0..self.n_records())
            .map(|r| {
                let cdf = |q: f64| self.state.born_cdf(q).unwrap_or(0.0);
                Ok(ks_statistic_unsorted(&self.coordinate_samples(r), cdf)?)
            })
            .collect()
    }

    /// Sample variance of each coordinate pooled over paths and records.
    pub fn pooled_variance(&self) -> f64 {
        let n = self.positions.len() as f64;
        let mean = self.positions.iter().sum::<f64>() / n;
        self.positions.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    }
}

pub(crate) fn coordinate(x: &[f64]) -> f64 {
    if x.len() == 1 {
        x[0]
    } else {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Drift model precomputed for the hot loop.
#[derive(Clone, Copy)]
enum Dynamics {
    /// `b = −speed · x/|x|`, reflected at `floor`.
    Coulomb { speed: f64, floor: f64, scale: f64 },
    /// `b = −ω x`.
    Oscillator { omega: f64, sigma0: f64, dims: usize },
    /// `b = v`.
    Drift { velocity: f64 },
}

impl Dynamics {
    fn new(state: &WaveState) -> Self {
        let u = state.units();
        let l = state.length_scale();
        match state.kind() {
            StateKind::Hydrogen1s { .. } => Dynamics::Coulomb {
                speed: u.hbar() / (u.mass() * l),
                floor: HYDROGEN_FLOOR * l,
                scale: l,
            },
            StateKind::HarmonicGround { omega, dimensions } => Dynamics::Oscillator {
                omega,
                sigma0: l / std::f64::consts::SQRT_2,
                dims: dimensions,
            },
            StateKind::PlaneWave { k } => Dynamics::Drift {
                velocity: u.hbar() * k / u.mass(),
            },
        }
    }

    fn initial(&self, rng: &mut StreamRng, x: &mut [f64]) {
        match *self {
            Dynamics::Coulomb { scale, .. } => {
                let r = 0.5 * scale * invert_hydrogen_cdf(rng.uniform_open());
                let mut dir = [0.0; 3];
                let mut n2 = 0.0;
                while n2 < 1e-24 {
                    for d in dir.iter_mut() {
                        *d = rng.normal();
                    }
                    n2 = dir.iter().map(|v| v * v).sum();
                }
                let inv = r / n2.sqrt();
                for (xi, di) in x.iter_mut().zip(dir) {
                    *xi = di * inv;
                }
            }
            Dynamics::Oscillator { sigma0, dims, .. } => {
                for xi in x.iter_mut().take(dims) {
                    *xi = sigma0 * rng.normal();
                }
            }
            Dynamics::Drift { .. } => x.fill(0.0),
        }
    }

    #[inline]
    fn step(&self, rng: &mut StreamRng, x: &mut [f64], dt: f64, sigma: f64) {
        match *self {
            Dynamics::Coulomb { speed, floor, .. } => {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let pull = -speed * dt / r;
                for xi in x.iter_mut() {
                    *xi += pull * *xi + sigma * rng.normal();
                }
                let r_new = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                if r_new < floor {
                    if r_new == 0.0 {
                        x[0] = floor;
                    } else {
                        let k = (2.0 * floor - r_new) / r_new;
                        for xi in x.iter_mut() {
                            *xi *= k;
                        }
                    }
                }
            }
            Dynamics::Oscillator { omega, .. } => {
                let decay = 1.0 - omega * dt;
                for xi in x.iter_mut() {
                    *xi = decay * *xi + sigma * rng.normal();
                }
            }
            Dynamics::Drift { velocity } => {
                for xi in x.iter_mut() {
                    *xi += velocity * dt;
                    if sigma > 0.0 {
                        *xi += sigma * rng.normal();
                    }
                }
            }
        }
    }
}

/// Solves `1 − e^{−y}(1 + y + y²/2) = u` for `y = 2Zr/a₀`.
fn invert_hydrogen_cdf(u: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 80.0f64);
    let mut y = 2.674_060_313_723_59; // median
    for _ in 0..200 {
        let f = hydrogen_radial_cdf(y) - u;
        if f > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let pdf = 0.5 * y * y * (-y).exp();
        let newton = y - f / pdf;
        let next = if pdf > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - y).abs() <= 1e-15 * y.max(1e-300) || hi - lo < 1e-15 * hi {
            return next;
        }
        y = next;
    }
    y
}

fn run_path(
    dynamics: Dynamics,
    cfg: &SimulationConfig,
    sigma: f64,
    index: usize,
    out: &mut [f64],
) {
    let dims = out.len() / cfg.n_records();
    let mut rng = RandomStream::new(cfg.master_seed, index as u64).generator();
    let mut x = [0.0f64; 3];
    let x = &mut x[..dims];
    dynamics.initial(&mut rng, x);
    for _ in 0..cfg.burn_in_steps {
        dynamics.step(&mut rng, x, cfg.dt, sigma);
    }
    out[..dims].copy_from_slice(x);
    for record in out[dims..].chunks_exact_mut(dims) {
        for _ in 0..cfg.record_stride {
            dynamics.step(&mut rng, x, cfg.dt, sigma);
        }
        record.copy_from_slice(x);
    }
}

#[cfg(feature = "parallel")]
fn run_all(
    dynamics: Dynamics,
    cfg: &SimulationConfig,
    sigma: f64,
    positions: &mut [f64],
    chunk: usize,
) -> Result<(), KinematicsError> {
    use rayon::prelude::*;
    let work = |positions: &mut [f64]| {
        positions
            .par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, out)| run_path(dynamics, cfg, sigma, i, out));
    };
    match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| KinematicsError::ThreadPool(e.to_string()))?;
            pool.install(|| work(positions));
        }
        None => work(positions),
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn run_all(
    dynamics: Dynamics,
    cfg: &SimulationConfig,
    sigma: f64,
    positions: &mut [f64],
    chunk: usize,
) -> Result<(), KinematicsError> {
    for (i, out) in positions.chunks_mut(chunk).enumerate() {
        run_path(dynamics, cfg, sigma, i, out);
    }
    Ok(())
}

pub fn simulate_ensemble(
    state: &WaveState,
    cfg: &SimulationConfig,
) -> Result<TrajectoryEnsemble, KinematicsError> {
    cfg.validate(state)?;
    let dims = state.dimensions();
    let chunk = cfg.n_records() * dims;
    let mut positions = vec![0.0; cfg.n_paths * chunk];
    let nu = state.diffusion_coefficient() * cfg.diffusion_scale;
    let sigma = (2.0 * nu * cfg.dt).sqrt();
    run_all(Dynamics::new(state), cfg, sigma, &mut positions, chunk)?;
    if positions.iter().any(|v| !v.is_finite()) {
        return Err(KinematicsError::NonFinitePosition);
    }
    Ok(TrajectoryEnsemble {
        state: *state,
        config: *cfg,
        dimensions: dims,
        positions,
    })
}
