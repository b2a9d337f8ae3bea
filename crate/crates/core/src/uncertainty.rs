//! Uncertainty-relation estimates for hydrogen-like ground states and the
//! angular-momentum dispersion bookkeeping.
//!
//! The ground-state energy is written through the minimal dispersions
//! allowed by the uncertainty relations,
//! `E(r) = (1/2m)[ħ²/4r² + 3ħ²/4r²] − Ze²/r = ħ²/(2mr²) − Ze²/r`,
//! and minimized in r.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{minimize_scalar, NumericsError};
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UncertaintyError {
    #[error("radius must be finite and positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("nuclear charge must be at least 1, got {0}")]
    InvalidCharge(f64),
    #[error("stationarity refinement did not converge")]
    NoConvergence,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn check_radius(r: f64) -> Result<(), UncertaintyError> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(UncertaintyError::NonPositiveRadius(r))
    }
}

fn check_charge(z: f64) -> Result<(), UncertaintyError> {
    if z.is_finite() && z >= 1.0 {
        Ok(())
    } else {
        Err(UncertaintyError::InvalidCharge(z))
    }
}

/// `⟨(ΔP_r)²⟩ = ħ²/(4r²)`: the radial uncertainty bound saturated at
/// `⟨(Δr)²⟩ = r²`.
pub fn radial_momentum_dispersion(units: &UnitSystem, r: f64) -> Result<f64, UncertaintyError> {
    check_radius(r)?;
    let h = units.hbar();
    Ok(h * h / (4.0 * r * r))
}

/// Equal Cartesian dispersions `ħ²/4` of a spherically symmetric ground state.
pub fn ground_angular_dispersions(units: &UnitSystem) -> [f64; 3] {
    let q = units.hbar() * units.hbar() / 4.0;
    [q, q, q]
}

/// `Σ⟨(ΔL_i)²⟩ = 3ħ²/4`.
pub fn ground_angular_dispersion_sum(units: &UnitSystem) -> f64 {
    ground_angular_dispersions(units).iter().sum()
}

/// Ground-state energy as a function of the orbital radius.
pub fn energy_functional(units: &UnitSystem, r: f64, z: f64) -> Result<f64, UncertaintyError> {
    check_radius(r)?;
    check_charge(z)?;
    Ok(energy_unchecked(units, r, z))
}

fn energy_unchecked(units: &UnitSystem, r: f64, z: f64) -> f64 {
    let m = units.mass();
    let p_disp = radial_dispersion_unchecked(units, r);
    let l_disp = ground_angular_dispersion_sum(units);
    (p_disp + l_disp / (r * r)) / (2.0 * m) - z * units.charge() * units.charge() / r
}

fn radial_dispersion_unchecked(units: &UnitSystem, r: f64) -> f64 {
    units.hbar() * units.hbar() / (4.0 * r * r)
}

/// `∂E/∂r = −ħ²/(m r³) + Z e²/r²`.
fn energy_slope(units: &UnitSystem, r: f64, z: f64) -> f64 {
    let h2 = units.hbar() * units.hbar();
    -h2 / (units.mass() * r * r * r) + z * units.charge() * units.charge() / (r * r)
}

/// General mean-plus-dispersion energy
/// `(1/2m)[⟨P_r⟩² + ⟨L⟩²/r²] + (1/2m)[⟨(ΔP_r)²⟩ + ⟨(ΔL)²⟩/r²] − Ze²/r`.
/// `l_disp` is the summed Cartesian dispersion. `z = 0` drops the Coulomb term.
pub fn total_energy_general(
    units: &UnitSystem,
    p_r_mean: f64,
    l_mean: f64,
    r: f64,
    p_r_disp: f64,
    l_disp: f64,
    z: f64,
) -> Result<f64, UncertaintyError> {
    check_radius(r)?;
    let m = units.mass();
    let r2 = r * r;
    let mean = (p_r_mean * p_r_mean + l_mean * l_mean / r2) / (2.0 * m);
    let spread = (p_r_disp + l_disp / r2) / (2.0 * m);
    Ok(mean + spread - z * units.charge() * units.charge() / r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationalResult {
    pub z: f64,
    /// Stationary radius `ħ²/(mZe²) = a₀/Z`.
    pub r_opt: f64,
    /// `−mZ²e⁴/(2ħ²)`.
    pub e_opt: f64,
    pub p_r_dispersion: f64,
    pub l_dispersion_sum: f64,
    pub numeric_r_opt: f64,
    pub numeric_e_opt: f64,
    /// Radius from the variant form `ħ²/(2me²)`, off by a factor 2; kept for reporting.
    pub printed_r_opt: f64,
}

/// Minimizes the ground-state energy functional.
///
/// The numeric route brackets the minimum by golden-section search and then
/// polishes the result with Newton steps on `∂E/∂r = 0`, since comparing
/// energies alone cannot resolve the minimizer below ~1e-8·a₀.
pub fn minimize_energy(units: &UnitSystem, z: f64) -> Result<VariationalResult, UncertaintyError> {
    check_charge(z)?;
    let (h, m, e) = (units.hbar(), units.mass(), units.charge());
    let a0 = units.bohr_radius();
    let r_opt = h * h / (m * z * e * e);
    let e_opt = -m * z * z * e.powi(4) / (2.0 * h * h);

    let bracket = (1e-3 * a0 / z, 10.0 * a0);
    let coarse = minimize_scalar(|r| energy_unchecked(units, r, z), bracket, 1e-7 * a0 / z)?;
    let numeric_r_opt = polish_stationary_point(units, z, coarse.x)?;
    Ok(VariationalResult {
        z,
        r_opt,
        e_opt,
        p_r_dispersion: radial_dispersion_unchecked(units, r_opt),
        l_dispersion_sum: ground_angular_dispersion_sum(units),
        numeric_r_opt,
        numeric_e_opt: energy_unchecked(units, numeric_r_opt, z),
        printed_r_opt: h * h / (2.0 * m * e * e),
    })
}

/// Newton iteration on `∂E/∂r = 0`, using a finite-difference second
/// derivative of the analytic slope.
fn polish_stationary_point(units: &UnitSystem, z: f64, start: f64) -> Result<f64, UncertaintyError> {
    let mut r = start;
    let mut last_step = f64::INFINITY;
    for _ in 0..50 {
        let g = energy_slope(units, r, z);
        let h = 1e-5 * r;
        let curvature = (energy_slope(units, r + h, z) - energy_slope(units, r - h, z)) / (2.0 * h);
        if !(curvature > 0.0) {
            return Err(UncertaintyError::NoConvergence);
        }
        let step = g / curvature;
        r -= step;
        last_step = step.abs();
        if last_step <= 4.0 * f64::EPSILON * r {
            return Ok(r);
        }
    }
    // rounding can leave a one-ulp oscillation
    if last_step <= 1e-12 * r {
        Ok(r)
    } else {
        Err(UncertaintyError::NoConvergence)
    }
}

/// Cartesian dispersions for a state with `⟨L_z⟩ = lħ`:
/// `(lħ²/2, lħ²/2, ħ²/4)` for `l ≥ 1`, and the spherically symmetric ground
/// assignment `(ħ²/4, ħ²/4, ħ²/4)` for `l = 0`.
pub fn dispersion_assignment(units: &UnitSystem, l: u32) -> [f64; 3] {
    if l == 0 {
        return ground_angular_dispersions(units);
    }
    let h2 = units.hbar() * units.hbar();
    let transverse = l as f64 * h2 / 2.0;
    [transverse, transverse, h2 / 4.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DispersionBranch {
    /// `l = 0`: spherically symmetric ground-state assignment.
    SphericalGround,
    /// `l ≥ 1`: `(lħ²/2, lħ²/2, ħ²/4)`.
    Axial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularMomentumReport {
    pub l: u32,
    pub branch: DispersionBranch,
    pub lz_mean: f64,
    pub dx2: f64,
    pub dy2: f64,
    pub dz2: f64,
    /// `⟨L_z⟩² + Σ⟨(ΔL_i)²⟩`.
    pub l_square_assembled: f64,
    /// `ħ²(l + 1/2)²`, the closed form the assembly reduces to for `l ≥ 1`.
    pub l_square_closed: f64,
    /// Operator-algebra value `ħ² l(l+1)`.
    pub l_square_standard: f64,
    /// `[xy ≥ (ħ²/4) z, yz ≥ (ħ²/4) x, zx ≥ (ħ²/4) y]` for the dispersions.
    pub inequalities_satisfied: [bool; 3],
    /// Which of the three hold with equality.
    pub inequalities_saturated: [bool; 3],
}

pub fn l_square_report(units: &UnitSystem, l: u32) -> AngularMomentumReport {
    let h2 = units.hbar() * units.hbar();
    let [dx2, dy2, dz2] = dispersion_assignment(units, l);
    let lz_mean = l as f64 * units.hbar();
    let q = h2 / 4.0;
    let pairs = [(dx2 * dy2, q * dz2), (dy2 * dz2, q * dx2), (dz2 * dx2, q * dy2)];
    let tol = |a: f64, b: f64| 1e-14 * a.abs().max(b.abs());
    let satisfied = pairs.map(|(lhs, rhs)| lhs >= rhs - tol(lhs, rhs));
    let saturated = pairs.map(|(lhs, rhs)| (lhs - rhs).abs() <= tol(lhs, rhs));
    let half = l as f64 + 0.5;
    AngularMomentumReport {
        l,
        branch: if l == 0 {
            DispersionBranch::SphericalGround
        } else {
            DispersionBranch::Axial
        },
        lz_mean,
        dx2,
        dy2,
        dz2,
        l_square_assembled: lz_mean * lz_mean + dx2 + dy2 + dz2,
        l_square_closed: h2 * half * half,
        l_square_standard: h2 * l as f64 * (l as f64 + 1.0),
        inequalities_satisfied: satisfied,
        inequalities_saturated: saturated,
    }
}
