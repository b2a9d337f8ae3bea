//! Unit system and the handful of constants every formula consumes.
//!
//! Everything in this crate is evaluated in Gaussian-convention atomic units
//! (ħ = m = e = 1, C = 1/α). The constants are still carried explicitly so
//! that scaling laws can be checked by building a modified system.

use serde::Serialize;
use thiserror::Error;

/// CODATA 2018 inverse fine-structure constant.
pub const INVERSE_FINE_STRUCTURE: f64 = 137.035999084;

/// Relative tolerance for the α = e²/(ħC) consistency check.
const ALPHA_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("{name} must be finite and strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("alpha {given} is inconsistent with charge^2/(hbar*light_speed) = {expected}")]
    InconsistentAlpha { given: f64, expected: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    hbar: f64,
    mass: f64,
    charge: f64,
    light_speed: f64,
    alpha: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64, UnitsError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(UnitsError::NonPositive { name, value })
    }
}

impl UnitSystem {
    /// Builds a unit system and derives α from the other constants.
    pub fn new(hbar: f64, mass: f64, charge: f64, light_speed: f64) -> Result<Self, UnitsError> {
        let hbar = positive("hbar", hbar)?;
        let mass = positive("mass", mass)?;
        let charge = positive("charge", charge)?;
        let light_speed = positive("light_speed", light_speed)?;
        Ok(Self {
            hbar,
            mass,
            charge,
            light_speed,
            alpha: charge * charge / (hbar * light_speed),
        })
    }

    /// Builds a unit system with an explicitly stated α, rejecting it unless
    /// it matches charge²/(ħ·C).
    pub fn with_alpha(
        hbar: f64,
        mass: f64,
        charge: f64,
        light_speed: f64,
        alpha: f64,
    ) -> Result<Self, UnitsError> {
        let units = Self::new(hbar, mass, charge, light_speed)?;
        let given = positive("alpha", alpha)?;
        if ((given - units.alpha) / units.alpha).abs() > ALPHA_REL_TOL {
            return Err(UnitsError::InconsistentAlpha {
                given,
                expected: units.alpha,
            });
        }
        Ok(units)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Rest energy mC².
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.light_speed * self.light_speed
    }

    /// Reduced Compton wavelength ħ/(mC).
    pub fn compton_length(&self) -> f64 {
        self.hbar / (self.mass * self.light_speed)
    }

    /// Bohr radius ħ²/(m e²).
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.mass * self.charge * self.charge)
    }

    /// Upper angular-frequency cutoff 2mC²/ħ of the vacuum spectrum.
    pub fn omega_max(&self) -> f64 {
        2.0 * self.rest_energy() / self.hbar
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        atomic_units()
    }
}

/// Gaussian-convention atomic units: ħ = m = e = 1 and C = 1/α.
pub fn atomic_units() -> UnitSystem {
    UnitSystem {
        hbar: 1.0,
        mass: 1.0,
        charge: 1.0,
        light_speed: INVERSE_FINE_STRUCTURE,
        alpha: 1.0 / INVERSE_FINE_STRUCTURE,
    }
}

/// Spread length λ_o = √(3/2)·ħ/(mC) of the electron charge cloud.
pub fn oscillation_length(units: &UnitSystem) -> f64 {
    1.5f64.sqrt() * units.compton_length()
}
