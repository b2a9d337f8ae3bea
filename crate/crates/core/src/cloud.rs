//! Gaussian spread-charge model of the electron.
//!
//! The elementary charge is smeared with density
//! `F(ϱ) = (2/(3π))^{3/2} (mC/ħ)³ exp(-(ϱ/λ_o)²)`, which is the squared
//! ground-state amplitude of a 3D oscillator with length λ_o. The module
//! provides the density, the amplitude, the averaged self-potential (closed
//! erf form and an independent shell-integral Poisson solution), the
//! self-interaction energy (nested quadrature and closed form) and the
//! comparison of that energy with the vacuum kinetic energy.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{erf, integrate, NumericsError, QuadratureSpec};
use crate::units::{oscillation_length, UnitSystem};
use crate::vacuum::zpf_kinetic_energy_closed;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CloudError {
    #[error("radius must be finite and nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("radial grid must be positive and strictly increasing")]
    UnorderedGrid,
    #[error("radial grid [{lo}, {hi}] does not span [{need_lo}, {need_hi}]")]
    GridTooNarrow {
        lo: f64,
        hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error("radii and values differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Unit-charge Gaussian cloud; λ_o is always derived from the unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianCloud {
    lambda_o: f64,
    total_charge: f64,
    units: UnitSystem,
}

impl GaussianCloud {
    pub fn new(units: UnitSystem) -> Self {
        Self {
            lambda_o: oscillation_length(&units),
            total_charge: units.charge(),
            units,
        }
    }

    pub fn lambda_o(&self) -> f64 {
        self.lambda_o
    }

    pub fn total_charge(&self) -> f64 {
        self.total_charge
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    /// `∫ 4πϱ² F(ϱ) dϱ`, which should be 1.
    pub fn normalization(&self, spec: &QuadratureSpec) -> Result<f64, CloudError> {
        let l = self.lambda_o;
        let v = integrate(
            |x| 4.0 * PI * x * x * charge_density(self, l * x).unwrap_or(0.0),
            0.0,
            f64::INFINITY,
            spec,
        )?;
        Ok(v * l * l * l)
    }

    /// `⟨ϱ²⟩` under F; equals (3/2)λ_o².
    pub fn mean_square_radius(&self, spec: &QuadratureSpec) -> Result<f64, CloudError> {
        let l = self.lambda_o;
        let v = integrate(
            |x| 4.0 * PI * x.powi(4) * charge_density(self, l * x).unwrap_or(0.0),
            0.0,
            f64::INFINITY,
            spec,
        )?;
        Ok(v * l.powi(5))
    }
}

fn check_radius(rho: f64) -> Result<(), CloudError> {
    if rho.is_finite() && rho >= 0.0 {
        Ok(())
    } else {
        Err(CloudError::NegativeRadius(rho))
    }
}

/// Charge distribution F(ϱ) per unit volume.
pub fn charge_density(cloud: &GaussianCloud, rho: f64) -> Result<f64, CloudError> {
    check_radius(rho)?;
    let inverse_compton = 1.0 / cloud.units.compton_length();
    let peak = (2.0 / (3.0 * PI)).powf(1.5) * inverse_compton.powi(3);
    let x = rho / cloud.lambda_o;
    Ok(peak * (-x * x).exp())
}

/// Oscillator ground amplitude `ψ_o(ϱ) = (λ_o√π)^{-3/2} exp(-ϱ²/(2λ_o²))`.
pub fn oscillator_ground_amplitude(cloud: &GaussianCloud, rho: f64) -> Result<f64, CloudError> {
    check_radius(rho)?;
    let l = cloud.lambda_o;
    Ok((l * PI.sqrt()).powf(-1.5) * (-rho * rho / (2.0 * l * l)).exp())
}

/// Averaged self-potential `V(ϱ) = -(2e/(√π ϱ)) ∫₀^{ϱ/λ_o} e^{-x²} dx = -e·erf(ϱ/λ_o)/ϱ`.
/// At ϱ = 0 the removable singularity is replaced by its limit `-2e/(√π λ_o)`.
pub fn self_potential(cloud: &GaussianCloud, rho: f64) -> Result<f64, CloudError> {
    check_radius(rho)?;
    let e = cloud.total_charge;
    if rho == 0.0 {
        return Ok(-2.0 * e / (PI.sqrt() * cloud.lambda_o));
    }
    Ok(-e * erf(rho / cloud.lambda_o) / rho)
}

/// Tabulated radial function with piecewise-cubic Hermite interpolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self, CloudError> {
        if radii.len() != values.len() {
            return Err(CloudError::LengthMismatch(radii.len(), values.len()));
        }
        if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CloudError::UnorderedGrid);
        }
        Ok(Self { radii, values })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    fn slope(&self, i: usize) -> f64 {
        let (r, v) = (&self.radii, &self.values);
        let n = r.len();
        if n < 2 {
            0.0
        } else if i == 0 {
            (v[1] - v[0]) / (r[1] - r[0])
        } else if i == n - 1 {
            (v[n - 1] - v[n - 2]) / (r[n - 1] - r[n - 2])
        } else {
            // three-point derivative on a nonuniform grid
            let (h0, h1) = (r[i] - r[i - 1], r[i + 1] - r[i]);
            let d0 = (v[i] - v[i - 1]) / h0;
            let d1 = (v[i + 1] - v[i]) / h1;
            (h1 * d0 + h0 * d1) / (h0 + h1)
        }
    }

    /// Cubic Hermite interpolation; `None` outside the tabulated range.
    pub fn interpolate(&self, r: f64) -> Option<f64> {
        let radii = &self.radii;
        if !(r >= radii[0] && r <= *radii.last()?) {
            return None;
        }
        let i = match radii.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => return Some(self.values[i]),
            Err(i) => i - 1,
        };
        let h = radii[i + 1] - radii[i];
        let t = (r - radii[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Some(
            h00 * self.values[i]
                + h10 * h * self.slope(i)
                + h01 * self.values[i + 1]
                + h11 * h * self.slope(i + 1),
        )
    }
}

/// `n` logarithmically spaced radii on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "log_grid needs 0 < lo < hi and n >= 2");
    let step = (hi / lo).ln() / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo * (step * i as f64).exp()).collect();
    grid[n - 1] = hi;
    grid
}

/// Default grid for the Poisson cross-check: 200 log-spaced points on
/// `[0.01λ_o, 20λ_o]`.
pub fn default_grid(cloud: &GaussianCloud) -> Vec<f64> {
    log_grid(0.01 * cloud.lambda_o, 20.0 * cloud.lambda_o, 200)
}

/// Potential of the cloud from the spherically symmetric Poisson equation,
/// using the shell construction
/// `V(ϱ) = -e [ (1/ϱ) ∫₀^ϱ 4πs² F ds + ∫_ϱ^∞ 4πs F ds ]`.
pub fn self_potential_via_poisson(
    cloud: &GaussianCloud,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<RadialProfile, CloudError> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CloudError::UnorderedGrid);
    }
    let l = cloud.lambda_o;
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let (need_lo, need_hi) = (0.01 * l, 20.0 * l);
    // allow for the rounding in log_grid's endpoints
    if lo > need_lo * (1.0 + 1e-12) || hi < need_hi * (1.0 - 1e-12) {
        return Err(CloudError::GridTooNarrow {
            lo,
            hi,
            need_lo,
            need_hi,
        });
    }
    let density = |x: f64| charge_density(cloud, l * x).unwrap_or(0.0);
    let e = cloud.total_charge;
    let values = grid
        .iter()
        .map(|&rho| {
            let x = rho / l;
            let enclosed = integrate(|s| 4.0 * PI * s * s * density(s), 0.0, x, spec)? * l.powi(3);
            let shell = integrate(|s| 4.0 * PI * s * density(s), x, f64::INFINITY, spec)? * l * l;
            Ok(-e * (enclosed / rho + shell))
        })
        .collect::<Result<Vec<f64>, CloudError>>()?;
    RadialProfile::new(grid.to_vec(), values)
}

/// Self-interaction energy by two-level quadrature:
/// `E_p = (2e/√π)(4πe/(π√π λ_o)) ∫₀^∞ e^{-u²} u [∫₀^u e^{-x²} dx] du`.
pub fn self_energy(cloud: &GaussianCloud, spec: &QuadratureSpec) -> Result<f64, CloudError> {
    let failure: Cell<Option<NumericsError>> = Cell::new(None);
    let inner = |u: f64| match integrate(|x| (-x * x).exp(), 0.0, u, spec) {
        Ok(v) => v,
        Err(err) => {
            failure.set(Some(err));
            0.0
        }
    };
    let outer = integrate(|u| (-u * u).exp() * u * inner(u), 0.0, f64::INFINITY, spec)?;
    if let Some(err) = failure.take() {
        return Err(err.into());
    }
    let e = cloud.total_charge;
    let prefactor = 2.0 * e / PI.sqrt() * (4.0 * PI * e / (PI * PI.sqrt() * cloud.lambda_o));
    Ok(prefactor * outer)
}

/// `E_p = √(2/π) e²/λ_o`.
pub fn self_energy_closed(cloud: &GaussianCloud) -> f64 {
    let e = cloud.total_charge;
    (2.0 / PI).sqrt() * e * e / cloud.lambda_o
}

/// The same energy written through the fine-structure constant:
/// `(2/√(3π)) α mC²`.
pub fn self_energy_closed_alpha_form(units: &UnitSystem) -> f64 {
    2.0 / (3.0 * PI).sqrt() * units.alpha() * units.rest_energy()
}

/// Vacuum kinetic energy against the self-interaction energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBudget {
    pub e_kinetic: f64,
    pub e_potential: f64,
    pub ratio: f64,
    pub rel_difference: f64,
}

/// Quantifies how close the vacuum kinetic energy and the self-interaction
/// energy are; analytically their ratio is `√(π/3)`.
pub fn energy_budget_compare(units: &UnitSystem) -> EnergyBudget {
    let e_kinetic = zpf_kinetic_energy_closed(units);
    let e_potential = self_energy_closed(&GaussianCloud::new(*units));
    EnergyBudget {
        e_kinetic,
        e_potential,
        ratio: e_potential / e_kinetic,
        rel_difference: (e_potential - e_kinetic).abs() / e_potential,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::atomic_units;

    fn cloud() -> GaussianCloud {
        GaussianCloud::new(atomic_units())
    }

    #[test]
    fn density_shape() {
        let c = cloud();
        let peak = charge_density(&c, 0.0).unwrap();
        // mpmath: (2/(3π))^{3/2} · 137.035999084³
        assert!((peak / 251_560.421_476_163_57 - 1.0).abs() < 1e-13);
        let at_lambda = charge_density(&c, c.lambda_o()).unwrap();
        assert!((at_lambda / peak - (-1.0f64).exp()).abs() < 1e-15);
        assert!(charge_density(&c, -1.0).is_err());
    }

    #[test]
    fn normalization_and_second_moment() {
        let c = cloud();
        let spec = QuadratureSpec::default();
        assert!((c.normalization(&spec).unwrap() - 1.0).abs() < 1e-10);
        let r2 = c.mean_square_radius(&spec).unwrap();
        assert!((c.lambda_o().powi(2) / r2 - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn amplitude_peak_and_born_identity() {
        let c = cloud();
        let l = c.lambda_o();
        let psi0 = oscillator_ground_amplitude(&c, 0.0).unwrap();
        assert!((psi0 / (l * PI.sqrt()).powf(-1.5) - 1.0).abs() < 1e-15);
        for rho in log_grid(0.01 * l, 8.0 * l, 200) {
            let psi = oscillator_ground_amplitude(&c, rho).unwrap();
            let f = charge_density(&c, rho).unwrap();
            assert!((psi * psi / f - 1.0).abs() < 1e-12, "rho={rho}");
        }
    }

    #[test]
    #[allow(clippy::approx_constant)] // frozen digits, independent of std's constant
    fn potential_limits() {
        let c = cloud();
        let l = c.lambda_o();
        let v0 = self_potential(&c, 0.0).unwrap();
        assert!((v0 * l + 1.128_379_167_095_512_6).abs() < 1e-12);
        let tiny = self_potential(&c, 1e-9 * l).unwrap();
        assert!((tiny / v0 - 1.0).abs() < 1e-12);
        for k in [10.0, 15.0, 40.0] {
            let rho = k * l;
            assert!((rho * self_potential(&c, rho).unwrap() + 1.0).abs() < 1e-10);
        }
        // ∫₀¹ e^{-x²} dx = 0.746824132812427025
        let v1 = self_potential(&c, l).unwrap();
        assert!((v1 * l / (-2.0 / PI.sqrt()) - 0.746_824_132_812_427).abs() < 1e-14);
    }

    #[test]
    fn poisson_route_agrees() {
        let c = cloud();
        let spec = QuadratureSpec::default();
        let profile = self_potential_via_poisson(&c, &default_grid(&c), &spec).unwrap();
        for (&rho, &v) in profile.radii().iter().zip(profile.values()) {
            let direct = self_potential(&c, rho).unwrap();
            assert!((v / direct - 1.0).abs() < 1e-6, "rho={rho}");
        }
        let last = profile.len() - 1;
        assert!((profile.radii()[last] * profile.values()[last] + 1.0).abs() < 1e-6);
        assert!(profile.values().windows(2).all(|w| w[1] >= w[0]));
        assert!(profile.values().iter().all(|&v| v < 0.0));
        let l = c.lambda_o();
        let mid = profile.interpolate(l).unwrap();
        assert!((mid / self_potential(&c, l).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn poisson_grid_contract() {
        let c = cloud();
        let spec = QuadratureSpec::default();
        let l = c.lambda_o();
        assert!(matches!(
            self_potential_via_poisson(&c, &log_grid(0.1 * l, 20.0 * l, 10), &spec),
            Err(CloudError::GridTooNarrow { .. })
        ));
        assert!(matches!(
            self_potential_via_poisson(&c, &[0.01 * l, 0.005 * l, 20.0 * l], &spec),
            Err(CloudError::UnorderedGrid)
        ));
    }

    #[test]
    fn self_energy_routes() {
        let c = cloud();
        let spec = QuadratureSpec::default();
        let nested = self_energy(&c, &spec).unwrap();
        let closed = self_energy_closed(&c);
        assert!((nested / closed - 1.0).abs() < 1e-8);
        assert!((nested * c.lambda_o() - 0.797_884_560_802_865_4).abs() < 1e-8);
        // mpmath: (2/√(3π))·137.035999084
        assert!((closed - 89.274_844_498_091_51).abs() < 1e-10);
        let alpha_form = self_energy_closed_alpha_form(c.units());
        assert!((alpha_form / closed - 1.0).abs() < 1e-14);
    }

    #[test]
    fn self_energy_scales_inversely_with_lambda() {
        let u = atomic_units();
        let wide = UnitSystem::new(1.0, 1.0, 1.0, u.light_speed() / 2.0).unwrap();
        let (narrow, wide) = (GaussianCloud::new(u), GaussianCloud::new(wide));
        assert!((wide.lambda_o() / narrow.lambda_o() - 2.0).abs() < 1e-15);
        let spec = QuadratureSpec::default();
        let ratio = self_energy(&wide, &spec).unwrap() / self_energy(&narrow, &spec).unwrap();
        assert!((ratio - 0.5).abs() < 1e-10);
    }

    #[test]
    fn budget_constants() {
        let b = energy_budget_compare(&atomic_units());
        assert!((b.ratio - 1.023_326_707_946_488_5).abs() < 1e-9);
        assert!((b.rel_difference - 0.022_794_976_194_160_157).abs() < 1e-9);
        let other = energy_budget_compare(&UnitSystem::new(2.0, 3.0, 0.5, 11.0).unwrap());
        assert!((other.ratio - b.ratio).abs() < 1e-13);
        assert!((other.rel_difference - b.rel_difference).abs() < 1e-13);
    }

    #[test]
    fn profile_validation() {
        assert!(RadialProfile::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(RadialProfile::new(vec![2.0, 1.0], vec![1.0, 1.0]).is_err());
        let p = RadialProfile::new(vec![1.0, 2.0, 3.0], vec![1.0, 4.0, 9.0]).unwrap();
        assert_eq!(p.interpolate(2.0), Some(4.0));
        assert!(p.interpolate(3.5).is_none());
    }
}
