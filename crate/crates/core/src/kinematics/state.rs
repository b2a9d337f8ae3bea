use std::f64::consts::PI;

use serde::Serialize;

use super::KinematicsError;
use crate::numerics::erf;
use crate::units::UnitSystem;

/// Analytic stationary states used as ground truth for the kinematics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateKind {
    /// Hydrogen-like 1s orbital for nuclear charge `z`.
    Hydrogen1s { z: f64 },
    /// Ground state of the isotropic oscillator in 1 or 3 dimensions.
    HarmonicGround { omega: f64, dimensions: usize },
    /// Free plane wave `e^{ikx}` in one dimension.
    PlaneWave { k: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveState {
    kind: StateKind,
    units: UnitSystem,
    energy: f64,
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl WaveState {
    pub fn hydrogen_1s(z: f64, units: UnitSystem) -> Result<Self, KinematicsError> {
        if !(z.is_finite() && z > 0.0) {
            return Err(KinematicsError::InvalidParameter {
                name: "Z",
                value: z,
            });
        }
        let (m, e, h) = (units.mass(), units.charge(), units.hbar());
        Ok(Self {
            kind: StateKind::Hydrogen1s { z },
            units,
            energy: -m * z * z * e.powi(4) / (2.0 * h * h),
        })
    }

    pub fn harmonic_ground(
        omega: f64,
        dimensions: usize,
        units: UnitSystem,
    ) -> Result<Self, KinematicsError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(KinematicsError::InvalidParameter {
                name: "omega",
                value: omega,
            });
        }
        if dimensions != 1 && dimensions != 3 {
            return Err(KinematicsError::InvalidParameter {
                name: "dimensions",
                value: dimensions as f64,
            });
        }
        Ok(Self {
            kind: StateKind::HarmonicGround { omega, dimensions },
            units,
            energy: 0.5 * dimensions as f64 * units.hbar() * omega,
        })
    }

    pub fn plane_wave(k: f64, units: UnitSystem) -> Result<Self, KinematicsError> {
        if !k.is_finite() {
            return Err(KinematicsError::InvalidParameter {
                name: "k",
                value: k,
            });
        }
        let h = units.hbar();
        Ok(Self {
            kind: StateKind::PlaneWave { k },
            units,
            energy: h * h * k * k / (2.0 * units.mass()),
        })
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    /// Analytic eigenvalue of the state.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn dimensions(&self) -> usize {
        match self.kind {
            StateKind::Hydrogen1s { .. } => 3,
            StateKind::HarmonicGround { dimensions, .. } => dimensions,
            StateKind::PlaneWave { .. } => 1,
        }
    }

    pub fn is_normalizable(&self) -> bool {
        !matches!(self.kind, StateKind::PlaneWave { .. })
    }

    /// Characteristic length: a₀/Z, the oscillator length √(ħ/mω), or 1/|k|.
    pub fn length_scale(&self) -> f64 {
        let u = &self.units;
        match self.kind {
            StateKind::Hydrogen1s { z } => u.bohr_radius() / z,
            StateKind::HarmonicGround { omega, .. } => (u.hbar() / (u.mass() * omega)).sqrt(),
            StateKind::PlaneWave { k } => {
                if k == 0.0 {
                    1.0
                } else {
                    1.0 / k.abs()
                }
            }
        }
    }

    /// Diffusion coefficient ν = ħ/(2m) of the trembling motion.
    pub fn diffusion_coefficient(&self) -> f64 {
        self.units.hbar() / (2.0 * self.units.mass())
    }

    pub(crate) fn check_position(&self, x: &[f64]) -> Result<(), KinematicsError> {
        if x.len() != self.dimensions() {
            return Err(KinematicsError::DimensionMismatch {
                expected: self.dimensions(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(KinematicsError::NonFinitePosition);
        }
        Ok(())
    }

    /// Natural log of the (positive) amplitude, analytic for every kind.
    pub fn ln_amplitude(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        self.check_position(x)?;
        Ok(match self.kind {
            StateKind::Hydrogen1s { .. } => {
                let a = self.length_scale();
                -0.5 * (PI * a * a * a).ln() - norm(x) / a
            }
            StateKind::HarmonicGround { dimensions, .. } => {
                let l = self.length_scale();
                let r2: f64 = x.iter().map(|v| v * v).sum();
                -(dimensions as f64) / 4.0 * (PI * l * l).ln() - r2 / (2.0 * l * l)
            }
            StateKind::PlaneWave { .. } => 0.0,
        })
    }

    pub fn amplitude(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        self.ln_amplitude(x).map(f64::exp)
    }

    /// Born density |Ψ|².
    pub fn born_density(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        self.ln_amplitude(x).map(|l| (2.0 * l).exp())
    }

    /// Phase action S₁(x, t): `-E t`, plus `ħ k x` for the plane wave.
    pub fn phase_action(&self, x: &[f64], t: f64) -> Result<f64, KinematicsError> {
        self.check_position(x)?;
        let spatial = match self.kind {
            StateKind::PlaneWave { k } => self.units.hbar() * k * x[0],
            _ => 0.0,
        };
        Ok(spatial - self.energy * t)
    }

    /// External potential energy U(x).
    pub fn potential(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        self.check_position(x)?;
        let u = &self.units;
        match self.kind {
            StateKind::Hydrogen1s { z } => {
                let r = norm(x);
                if r == 0.0 {
                    return Err(KinematicsError::SingularPoint);
                }
                Ok(-z * u.charge() * u.charge() / r)
            }
            StateKind::HarmonicGround { omega, .. } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Ok(0.5 * u.mass() * omega * omega * r2)
            }
            StateKind::PlaneWave { .. } => Ok(0.0),
        }
    }

    /// CDF of the Born law in the coordinate the ensemble statistics use:
    /// the signed coordinate for 1D states, the radius for 3D states.
    pub fn born_cdf(&self, q: f64) -> Option<f64> {
        match self.kind {
            StateKind::Hydrogen1s { .. } => {
                if q <= 0.0 {
                    return Some(0.0);
                }
                let y = 2.0 * q / self.length_scale();
                Some(hydrogen_radial_cdf(y))
            }
            StateKind::HarmonicGround { dimensions: 1, .. } => {
                Some(0.5 * (1.0 + erf(q / self.length_scale())))
            }
            StateKind::HarmonicGround { .. } => {
                if q <= 0.0 {
                    return Some(0.0);
                }
                let s = q / self.length_scale();
                Some(erf(s) - 2.0 / PI.sqrt() * s * (-s * s).exp())
            }
            StateKind::PlaneWave { .. } => None,
        }
    }

    /// Rate scale `max|∇b|` of the forward drift, used to bound the time step.
    pub fn drift_rate(&self) -> f64 {
        let u = &self.units;
        match self.kind {
            StateKind::Hydrogen1s { .. } => {
                let a = self.length_scale();
                u.hbar() / (u.mass() * a * a)
            }
            StateKind::HarmonicGround { omega, .. } => omega,
            StateKind::PlaneWave { .. } => 0.0,
        }
    }
}

/// `P(2Zr/a₀ ≤ y)` for the 1s radial law: `1 - e^{-y}(1 + y + y²/2)`.
pub(crate) fn hydrogen_radial_cdf(y: f64) -> f64 {
    if y < 1e-3 {
        // leading series term avoids cancellation near the origin
        return y * y * y / 6.0 * (1.0 - 0.75 * y + 0.3 * y * y);
    }
    1.0 - (-y).exp() * (1.0 + y + 0.5 * y * y)
}
