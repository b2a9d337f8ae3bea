//! Complex action `Ψ = exp(iS₁/ħ − S₂/ħ)` and the velocities derived from it.
//!
//! Sign convention: the osmotic velocity is `u = ∇S₂/m`. The real
//! drift a diffusion path feels is `osmotic_drift = −u = (ħ/m)∇ln|Ψ|`, so the
//! forward velocity is `v₊ = v + osmotic_drift` and the backward one
//! `v₋ = v − osmotic_drift`.

use serde::Serialize;

use super::state::{norm, StateKind, WaveState};
use super::KinematicsError;

/// `(S₁, S₂)` of a state with the normalization constant `B = |Ψ(0)|`, chosen
/// so that `S₂(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexAction {
    state: WaveState,
    norm_constant: f64,
    ln_norm: f64,
}

pub fn decompose_action(state: &WaveState) -> Result<ComplexAction, KinematicsError> {
    let origin = vec![0.0; state.dimensions()];
    let ln_norm = state.ln_amplitude(&origin)?;
    Ok(ComplexAction {
        state: *state,
        norm_constant: ln_norm.exp(),
        ln_norm,
    })
}

impl ComplexAction {
    pub fn state(&self) -> &WaveState {
        &self.state
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn s1(&self, x: &[f64], t: f64) -> Result<f64, KinematicsError> {
        self.state.phase_action(x, t)
    }

    /// `S₂ = −ħ ln(|Ψ|/B)`; fails where the amplitude underflows to zero.
    pub fn s2(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        let ln_amp = self.state.ln_amplitude(x)?;
        if ln_amp.exp() == 0.0 {
            return Err(KinematicsError::ZeroAmplitude);
        }
        Ok(-self.state.units().hbar() * (ln_amp - self.ln_norm))
    }

    /// `B exp(−S₂/ħ)`, which must reproduce the amplitude.
    pub fn reconstruct_amplitude(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        let s2 = self.s2(x)?;
        Ok(self.norm_constant * (-s2 / self.state.units().hbar()).exp())
    }

    pub fn grad_s1(&self, x: &[f64]) -> Result<Vec<f64>, KinematicsError> {
        self.state.check_position(x)?;
        let mut g = vec![0.0; x.len()];
        if let StateKind::PlaneWave { k } = self.state.kind() {
            g[0] = self.state.units().hbar() * k;
        }
        Ok(g)
    }

    pub fn grad_s2(&self, x: &[f64]) -> Result<Vec<f64>, KinematicsError> {
        self.state.check_position(x)?;
        let hbar = self.state.units().hbar();
        let l = self.state.length_scale();
        Ok(match self.state.kind() {
            StateKind::Hydrogen1s { .. } => {
                let r = norm(x);
                if r == 0.0 {
                    return Err(KinematicsError::SingularPoint);
                }
                x.iter().map(|xi| hbar / l * xi / r).collect()
            }
            StateKind::HarmonicGround { .. } => x.iter().map(|xi| hbar * xi / (l * l)).collect(),
            StateKind::PlaneWave { .. } => vec![0.0; x.len()],
        })
    }

    pub fn laplacian_s2(&self, x: &[f64]) -> Result<f64, KinematicsError> {
        self.state.check_position(x)?;
        let hbar = self.state.units().hbar();
        let l = self.state.length_scale();
        Ok(match self.state.kind() {
            StateKind::Hydrogen1s { .. } => {
                let r = norm(x);
                if r == 0.0 {
                    return Err(KinematicsError::SingularPoint);
                }
                2.0 * hbar / (l * r)
            }
            StateKind::HarmonicGround { dimensions, .. } => hbar * dimensions as f64 / (l * l),
            StateKind::PlaneWave { .. } => 0.0,
        })
    }
}

/// Current velocity `v = ∇S₁/m` and osmotic velocity `u = ∇S₂/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityField {
    action: ComplexAction,
}

pub fn velocity_fields(state: &WaveState) -> Result<VelocityField, KinematicsError> {
    Ok(VelocityField {
        action: decompose_action(state)?,
    })
}

impl VelocityField {
    pub fn action(&self) -> &ComplexAction {
        &self.action
    }

    fn inv_mass(&self) -> f64 {
        1.0 / self.action.state.units().mass()
    }

    pub fn current(&self, x: &[f64]) -> Result<Vec<f64>, KinematicsError> {
        let m = self.inv_mass();
        Ok(self.action.grad_s1(x)?.into_iter().map(|g| g * m).collect())
    }

    /// Osmotic velocity `u = ∇S₂/m` (points away from the density peak).
    pub fn osmotic(&self, x: &[f64]) -> Result<Vec<f64>, KinematicsError> {
        let m = self.inv_mass();
        Ok(self.action.grad_s2(x)?.into_iter().map(|g| g * m).collect())
    }

    /// Real drift of the diffusion, `−u`.
    pub fn osmotic_drift(&self, x: &[f64]) -> Result<Vec<f64>, KinematicsError> {
        Ok(self.osmotic(x)?.into_iter().map(|u| -u).collect())
    }
}

/// `(v₊, v₋)` at `x`; their half-sum is the current velocity and their
/// half-difference the osmotic drift.
pub fn forward_backward_velocities(
    state: &WaveState,
    x: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), KinematicsError> {
    let field = velocity_fields(state)?;
    let v = field.current(x)?;
    let drift = field.osmotic_drift(x)?;
    let plus = v.iter().zip(&drift).map(|(a, b)| a + b).collect();
    let minus = v.iter().zip(&drift).map(|(a, b)| a - b).collect();
    Ok((plus, minus))
}
