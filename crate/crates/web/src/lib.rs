//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export wraps a plain Rust function returning `Result<_, String>`, so
//! the numerics can be tested natively.

use tremor::cloud::{log_grid, self_potential, self_potential_via_poisson, GaussianCloud};
use tremor::kinematics::{simulate_ensemble, SimulationConfig, WaveState};
use tremor::numerics::QuadratureSpec;
use tremor::uncertainty::{energy_functional, minimize_energy};
use tremor::atomic_units;
use wasm_bindgen::prelude::*;

/// Self-potential of the charge cloud on a log grid, by both routes.
#[wasm_bindgen]
pub struct PotentialProfile {
    radii: Vec<f64>,
    closed: Vec<f64>,
    poisson: Vec<f64>,
    point: Vec<f64>,
    lambda_o: f64,
}

#[wasm_bindgen]
impl PotentialProfile {
    /// Radii in units of λ_o.
    #[wasm_bindgen(getter)]
    pub fn radii(&self) -> Vec<f64> {
        self.radii.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn closed(&self) -> Vec<f64> {
        self.closed.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn poisson(&self) -> Vec<f64> {
        self.poisson.clone()
    }
    /// Bare point-charge potential −e/ϱ.
    #[wasm_bindgen(getter)]
    pub fn point(&self) -> Vec<f64> {
        self.point.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn lambda_o(&self) -> f64 {
        self.lambda_o
    }
    /// Largest |closed − poisson| over the grid.
    #[wasm_bindgen(getter)]
    pub fn max_route_gap(&self) -> f64 {
        self.closed
            .iter()
            .zip(&self.poisson)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn potential_profile_native(points: usize) -> Result<PotentialProfile, String> {
    if !(2..=2000).contains(&points) {
        return Err(format!("points must lie in 2..=2000, got {points}"));
    }
    let u = atomic_units();
    let cloud = GaussianCloud::new(u);
    let l = cloud.lambda_o();
    let grid = log_grid(0.01 * l, 20.0 * l, points);
    let poisson = self_potential_via_poisson(&cloud, &grid, &QuadratureSpec::default())
        .map_err(|e| e.to_string())?;
    let closed = grid
        .iter()
        .map(|&r| self_potential(&cloud, r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(PotentialProfile {
        radii: grid.iter().map(|r| r / l).collect(),
        point: grid.iter().map(|r| -u.charge() / r).collect(),
        closed,
        poisson: poisson.values().to_vec(),
        lambda_o: l,
    })
}

#[wasm_bindgen]
pub fn potential_profile(points: usize) -> Result<PotentialProfile, JsError> {
    potential_profile_native(points).map_err(|e| JsError::new(&e))
}

/// Radial histogram of a simulated hydrogen ensemble next to the Born law.
#[wasm_bindgen]
pub struct RadialHistogram {
    centers: Vec<f64>,
    simulated: Vec<f64>,
    born: Vec<f64>,
    ks: f64,
}

#[wasm_bindgen]
impl RadialHistogram {
    #[wasm_bindgen(getter)]
    pub fn centers(&self) -> Vec<f64> {
        self.centers.clone()
    }
    /// Empirical density of |x| (counts per path per unit radius).
    #[wasm_bindgen(getter)]
    pub fn simulated(&self) -> Vec<f64> {
        self.simulated.clone()
    }
    /// Born radial density averaged over each bin.
    #[wasm_bindgen(getter)]
    pub fn born(&self) -> Vec<f64> {
        self.born.clone()
    }
    /// KS distance of the final radii to the Born law.
    #[wasm_bindgen(getter)]
    pub fn ks(&self) -> f64 {
        self.ks
    }
}

const MAX_DEMO_STEPS: u64 = 50_000_000;

pub fn radial_histogram_native(
    z: f64,
    diffusion_scale: f64,
    paths: usize,
    steps: usize,
    bins: usize,
    seed: u64,
) -> Result<RadialHistogram, String> {
    if bins == 0 || bins > 500 {
        return Err(format!("bins must lie in 1..=500, got {bins}"));
    }
    let state = WaveState::hydrogen_1s(z, atomic_units()).map_err(|e| e.to_string())?;
    let cfg = SimulationConfig {
        n_paths: paths,
        n_steps: steps,
        dt: 0.05 / (z * z),
        master_seed: seed,
        record_stride: steps.max(1),
        diffusion_scale,
        step_budget: MAX_DEMO_STEPS,
        workers: None,
        ..Default::default()
    };
    let ens = simulate_ensemble(&state, &cfg).map_err(|e| e.to_string())?;
    let last = ens.n_records() - 1;
    let radii = ens.coordinate_samples(last);
    let ks = ens.ks_by_record().map_err(|e| e.to_string())?[last];
    let hi = 6.0 / z;
    let width = hi / bins as f64;
    let mut counts = vec![0usize; bins];
    for r in &radii {
        let i = (r / width) as usize;
        if i < bins {
            counts[i] += 1;
        }
    }
    let norm = 1.0 / (radii.len() as f64 * width);
    let cdf = |q: f64| state.born_cdf(q).unwrap_or(0.0);
    Ok(RadialHistogram {
        centers: (0..bins).map(|i| (i as f64 + 0.5) * width).collect(),
        simulated: counts.iter().map(|&c| c as f64 * norm).collect(),
        born: (0..bins)
            .map(|i| (cdf((i + 1) as f64 * width) - cdf(i as f64 * width)) / width)
            .collect(),
        ks,
    })
}

#[wasm_bindgen]
pub fn radial_histogram(
    z: f64,
    diffusion_scale: f64,
    paths: usize,
    steps: usize,
    bins: usize,
    seed: u64,
) -> Result<RadialHistogram, JsError> {
    radial_histogram_native(z, diffusion_scale, paths, steps, bins, seed).map_err(|e| JsError::new(&e))
}

/// Ground-state energy functional E(r) for nuclear charge Z.
#[wasm_bindgen]
pub struct EnergyCurve {
    radii: Vec<f64>,
    energies: Vec<f64>,
    r_opt: f64,
    e_opt: f64,
}

#[wasm_bindgen]
impl EnergyCurve {
    #[wasm_bindgen(getter)]
    pub fn radii(&self) -> Vec<f64> {
        self.radii.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn energies(&self) -> Vec<f64> {
        self.energies.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn r_opt(&self) -> f64 {
        self.r_opt
    }
    #[wasm_bindgen(getter)]
    pub fn e_opt(&self) -> f64 {
        self.e_opt
    }
}

pub fn energy_curve_native(z: f64, points: usize) -> Result<EnergyCurve, String> {
    if !(2..=10_000).contains(&points) {
        return Err(format!("points must lie in 2..=10000, got {points}"));
    }
    let u = atomic_units();
    let best = minimize_energy(&u, z).map_err(|e| e.to_string())?;
    let radii = log_grid(0.1 * best.r_opt, 10.0 * best.r_opt, points);
    let energies = radii
        .iter()
        .map(|&r| energy_functional(&u, r, z))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(EnergyCurve {
        radii,
        energies,
        r_opt: best.numeric_r_opt,
        e_opt: best.numeric_e_opt,
    })
}

#[wasm_bindgen]
pub fn energy_curve(z: f64, points: usize) -> Result<EnergyCurve, JsError> {
    energy_curve_native(z, points).map_err(|e| JsError::new(&e))
}
