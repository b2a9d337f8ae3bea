//! Energy balances of the Hamilton–Jacobi family for stationary states.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::action::{decompose_action, ComplexAction};
use super::state::{StateKind, WaveState};
use super::KinematicsError;
use crate::numerics::{integrate, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HjVariant {
    /// `E = (∇S₁)²/2m + U`.
    Classical,
    /// `E = (∇S₁)²/2m + (∇S₂)²/2m + U`, the trembling kinetic energy added
    /// to the classical equation.
    Trembling,
    /// Real part of the complex Hamilton–Jacobi equation:
    /// `E = (∇S₁)²/2m − (∇S₂)²/2m + (ħ/2m)∇²S₂ + U`.
    Madelung,
}

impl HjVariant {
    pub const ALL: [HjVariant; 3] = [HjVariant::Classical, HjVariant::Trembling, HjVariant::Madelung];
}

fn residual_with(
    action: &ComplexAction,
    x: &[f64],
    variant: HjVariant,
) -> Result<f64, KinematicsError> {
    let state = action.state();
    let m = state.units().mass();
    let hbar = state.units().hbar();
    let sq = |g: Vec<f64>| g.iter().map(|v| v * v).sum::<f64>();
    let current = sq(action.grad_s1(x)?) / (2.0 * m);
    let potential = state.potential(x)?;
    let rhs = match variant {
        HjVariant::Classical => current + potential,
        HjVariant::Trembling => current + sq(action.grad_s2(x)?) / (2.0 * m) + potential,
        HjVariant::Madelung => {
            let quantum = -sq(action.grad_s2(x)?) / (2.0 * m)
                + hbar / (2.0 * m) * action.laplacian_s2(x)?;
            current + quantum + potential
        }
    };
    // −∂S₁/∂t = E for every supported (stationary) state
    Ok(state.energy() - rhs)
}

/// `E − (right-hand side of the chosen balance)` at `x`.
pub fn hamilton_jacobi_residual(
    state: &WaveState,
    x: &[f64],
    variant: HjVariant,
) -> Result<f64, KinematicsError> {
    residual_with(&decompose_action(state)?, x, variant)
}

/// Born-density expectation of an observable that depends only on |x|.
pub fn born_expectation<G>(
    state: &WaveState,
    observable: G,
    spec: &QuadratureSpec,
) -> Result<f64, KinematicsError>
where
    G: Fn(&[f64]) -> Result<f64, KinematicsError>,
{
    if !state.is_normalizable() {
        return Err(KinematicsError::NotNormalizable);
    }
    let l = state.length_scale();
    let dims = state.dimensions();
    let failure = std::cell::Cell::new(None);
    let eval = |x: &[f64]| -> f64 {
        match observable(x).and_then(|g| Ok(g * state.born_density(x)?)) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    // integrate in units of the state's length scale; the Jacobian stays inside
    // so the tolerances refer to the expectation itself
    let value = if dims == 1 {
        integrate(|s| l * (eval(&[l * s]) + eval(&[-l * s])), 0.0, f64::INFINITY, spec)?
    } else {
        let jacobian = 4.0 * PI * l.powi(3);
        integrate(
            |s| {
                if s == 0.0 {
                    0.0
                } else {
                    jacobian * s * s * eval(&[0.0, 0.0, l * s])
                }
            },
            0.0,
            f64::INFINITY,
            spec,
        )?
    };
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(value)
}

/// Born-weighted mean of the pointwise residual.
pub fn mean_residual(
    state: &WaveState,
    variant: HjVariant,
    spec: &QuadratureSpec,
) -> Result<f64, KinematicsError> {
    let action = decompose_action(state)?;
    born_expectation(state, |x| residual_with(&action, x, variant), spec)
}

/// Expectation-level energy balance `E = ⟨mv²/2⟩ + ⟨mu²/2⟩ + ⟨U⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateEnergyBudget {
    pub current_kinetic: f64,
    pub osmotic_kinetic: f64,
    pub potential: f64,
    pub total: f64,
    pub eigenvalue: f64,
}

pub fn energy_budget(
    state: &WaveState,
    spec: &QuadratureSpec,
) -> Result<StateEnergyBudget, KinematicsError> {
    if let StateKind::PlaneWave { .. } = state.kind() {
        return Err(KinematicsError::NotNormalizable);
    }
    let action = decompose_action(state)?;
    let m = state.units().mass();
    let kinetic = |g: Vec<f64>| g.iter().map(|v| v * v).sum::<f64>() / (2.0 * m);
    let current_kinetic = born_expectation(state, |x| Ok(kinetic(action.grad_s1(x)?)), spec)?;
    let osmotic_kinetic = born_expectation(state, |x| Ok(kinetic(action.grad_s2(x)?)), spec)?;
    let potential = born_expectation(state, |x| state.potential(x), spec)?;
    Ok(StateEnergyBudget {
        current_kinetic,
        osmotic_kinetic,
        potential,
        total: current_kinetic + osmotic_kinetic + potential,
        eigenvalue: state.energy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::atomic_units;

    #[test]
    fn madelung_vanishes_pointwise() {
        let u = atomic_units();
        for z in [1.0, 2.0, 5.0] {
            let s = WaveState::hydrogen_1s(z, u).unwrap();
            for i in 1..=50 {
                let r = 0.02 * i as f64;
                let x = [r * 0.6, 0.0, r * 0.8];
                let res = hamilton_jacobi_residual(&s, &x, HjVariant::Madelung).unwrap();
                assert!(res.abs() < 1e-10, "Z={z} r={r} res={res}");
            }
        }
        let s = WaveState::harmonic_ground(1.3, 1, u).unwrap();
        for i in -25..25 {
            let res = hamilton_jacobi_residual(&s, &[0.1 * i as f64], HjVariant::Madelung).unwrap();
            assert!(res.abs() < 1e-10);
        }
    }

    #[test]
    fn trembling_variant_at_half_bohr() {
        let s = WaveState::hydrogen_1s(1.0, atomic_units()).unwrap();
        let res = hamilton_jacobi_residual(&s, &[0.5, 0.0, 0.0], HjVariant::Trembling).unwrap();
        assert!((res - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classical_plane_wave() {
        let s = WaveState::plane_wave(0.8, atomic_units()).unwrap();
        for x in [-1.0, 0.0, 3.0] {
            assert_eq!(hamilton_jacobi_residual(&s, &[x], HjVariant::Classical).unwrap(), 0.0);
        }
    }

    #[test]
    fn trembling_variant_vanishes_on_average() {
        let u = atomic_units();
        // the mean is zero, so only an absolute target is meaningful
        let spec = QuadratureSpec::new(1e-11, 1e-12, 40).unwrap();
        let states = [
            WaveState::hydrogen_1s(1.0, u).unwrap(),
            WaveState::hydrogen_1s(5.0, u).unwrap(),
            WaveState::harmonic_ground(2.0, 1, u).unwrap(),
            WaveState::harmonic_ground(0.5, 3, u).unwrap(),
        ];
        for s in states {
            let mean = mean_residual(&s, HjVariant::Trembling, &spec).unwrap();
            assert!(mean.abs() < 1e-8, "{s:?}: {mean}");
        }
    }

    #[test]
    fn budgets_match_eigenvalues() {
        let u = atomic_units();
        let spec = QuadratureSpec::default();
        let b = energy_budget(&WaveState::hydrogen_1s(1.0, u).unwrap(), &spec).unwrap();
        assert!(b.current_kinetic.abs() < 1e-15);
        assert!((b.osmotic_kinetic - 0.5).abs() < 1e-10);
        assert!((b.potential + 1.0).abs() < 1e-10);
        assert!((b.total + 0.5).abs() < 1e-8);
        let omega = 1.7;
        let b = energy_budget(&WaveState::harmonic_ground(omega, 1, u).unwrap(), &spec).unwrap();
        assert!((b.osmotic_kinetic - omega / 4.0).abs() < 1e-10);
        assert!((b.potential - omega / 4.0).abs() < 1e-10);
        let b = energy_budget(&WaveState::harmonic_ground(omega, 3, u).unwrap(), &spec).unwrap();
        assert!((b.total - 1.5 * omega).abs() < 1e-8);
        assert!(matches!(
            energy_budget(&WaveState::plane_wave(1.0, u).unwrap(), &spec),
            Err(KinematicsError::NotNormalizable)
        ));
    }
}
