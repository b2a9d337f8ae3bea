//! Averaged kinetic energy an electron draws from the fluctuating vacuum.
//!
//! `E_k = (e²/π)(mC/ħ)(ħ/(mC²))² ∫ ω dω` over `[ω_min, ω_max]`, with the
//! default band `[0, 2mC²/ħ]` reducing to `E_k = (2/π) α mC²`.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{integrate, NumericsError, QuadratureSpec};
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VacuumError {
    #[error("invalid spectral cutoffs: need 0 <= omega_min <= omega_max, got [{0}, {1}]")]
    InvalidCutoffs(f64, f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralCutoffs {
    omega_min: f64,
    omega_max: f64,
}

impl SpectralCutoffs {
    pub fn new(omega_min: f64, omega_max: f64) -> Result<Self, VacuumError> {
        if omega_min.is_finite() && omega_max.is_finite() && 0.0 <= omega_min && omega_min <= omega_max
        {
            Ok(Self {
                omega_min,
                omega_max,
            })
        } else {
            Err(VacuumError::InvalidCutoffs(omega_min, omega_max))
        }
    }

    /// `[0, 2mC²/ħ]`.
    pub fn standard(units: &UnitSystem) -> Self {
        Self {
            omega_min: 0.0,
            omega_max: units.omega_max(),
        }
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZpfResult {
    pub e_kinetic: f64,
    pub cutoff_used: SpectralCutoffs,
    pub closed_form: f64,
    pub rel_deviation: f64,
    /// `e_kinetic / (mC²)`.
    pub rest_energy_ratio: f64,
}

fn spectral_prefactor(units: &UnitSystem) -> f64 {
    let e2 = units.charge() * units.charge();
    let inverse_compton = units.mass() * units.light_speed() / units.hbar();
    let t = units.hbar() / units.rest_energy();
    e2 / std::f64::consts::PI * inverse_compton * t * t
}

pub fn zpf_kinetic_energy(
    units: &UnitSystem,
    cutoffs: &SpectralCutoffs,
    spec: &QuadratureSpec,
) -> Result<f64, VacuumError> {
    let band = integrate(|w| w, cutoffs.omega_min, cutoffs.omega_max, spec)?;
    Ok(spectral_prefactor(units) * band)
}

pub fn zpf_kinetic_energy_closed(units: &UnitSystem) -> f64 {
    2.0 / std::f64::consts::PI * units.alpha() * units.rest_energy()
}

/// Quadrature value, closed form and their relative deviation.
pub fn zpf_report(
    units: &UnitSystem,
    cutoffs: &SpectralCutoffs,
    spec: &QuadratureSpec,
) -> Result<ZpfResult, VacuumError> {
    let e_kinetic = zpf_kinetic_energy(units, cutoffs, spec)?;
    let closed_form = zpf_kinetic_energy_closed(units);
    let rel_deviation = if closed_form != 0.0 {
        ((e_kinetic - closed_form) / closed_form).abs()
    } else {
        0.0
    };
    Ok(ZpfResult {
        e_kinetic,
        cutoff_used: *cutoffs,
        closed_form,
        rel_deviation,
        rest_energy_ratio: e_kinetic / units.rest_energy(),
    })
}
