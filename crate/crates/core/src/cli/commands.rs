use serde_json::{json, Value};

use super::args::{
    AngularArgs, CloudArgs, Command, Format, QuadratureArgs, SimulateArgs, StateArg,
    VariationalArgs, ZpfArgs,
};
use super::output::{Check, Relation, RunReport, SCHEMA_VERSION, UNIT_SYSTEM};
use super::{suite, to_value, CliError};
use crate::cloud::{
    charge_density, energy_budget_compare, log_grid, oscillator_ground_amplitude, self_energy,
    self_energy_closed, self_energy_closed_alpha_form, self_potential, self_potential_via_poisson,
    GaussianCloud,
};
use crate::kinematics::{
    estimate_velocities_from_paths, forward_backward_velocities, simulate_ensemble, Binning,
    SimulationConfig, StateKind, TrajectoryEnsemble, WaveState,
};
use crate::numerics::QuadratureSpec;
use crate::uncertainty::{energy_functional, l_square_report, minimize_energy};
use crate::units::{atomic_units, UnitSystem};
use crate::vacuum::{zpf_report, SpectralCutoffs};

/// Smallest ensemble for which the Born-law KS check is meaningful at 0.015.
pub const KS_MIN_PATHS: usize = 10_000;
pub const KS_THRESHOLD: f64 = 0.015;
/// Smallest ensemble for the plane-wave drift check.
pub const DRIFT_MIN_PATHS: usize = 100;

pub(crate) type Outcome = (Value, Vec<Check>);

pub(crate) fn dispatch(command: &Command, format: Format) -> Result<RunReport, CliError> {
    let (args, (results, checks)) = match command {
        Command::Zpf(a) => (to_value(a), zpf(a)?),
        Command::Cloud(a) => (to_value(a), cloud(a)?),
        Command::Simulate(a) => (to_value(a), simulate(a)?),
        Command::Variational(a) => (to_value(a), variational(a)?),
        Command::Angular(a) => (to_value(a), angular(a)?),
        Command::Report(a) => (to_value(a), suite::report_all(a)?),
    };
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        units: UNIT_SYSTEM,
        command: command.name(),
        config_echo: json!({ "command": command.name(), "format": format, "args": args }),
        results,
        checks,
        timestamp_unix: None,
    })
}

pub(crate) fn quadrature(q: &QuadratureArgs) -> Result<QuadratureSpec, CliError> {
    QuadratureSpec::new(q.abs_tol, q.rel_tol, q.max_depth).map_err(|e| CliError::Usage(e.to_string()))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so a broken value can never pass a check
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

pub(crate) fn zpf(a: &ZpfArgs) -> Result<Outcome, CliError> {
    let units = atomic_units();
    let spec = quadrature(&a.quadrature)?;
    let standard = SpectralCutoffs::standard(&units);
    let cutoffs = SpectralCutoffs::new(a.omega_min, a.omega_max.unwrap_or(standard.omega_max()))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let r = zpf_report(&units, &cutoffs, &spec)?;
    let results = json!({
        "e_kinetic": r.e_kinetic,
        "closed_form": r.closed_form,
        "rel_deviation": r.rel_deviation,
        "rest_energy": units.rest_energy(),
        "rest_energy_ratio": r.rest_energy_ratio,
        "omega_min": cutoffs.omega_min(),
        "omega_max": cutoffs.omega_max(),
        "unit_labels": {
            "e_kinetic": "hartree",
            "closed_form": "hartree",
            "rel_deviation": "dimensionless",
            "rest_energy": "hartree",
            "rest_energy_ratio": "dimensionless",
            "omega_min": "hartree/hbar",
            "omega_max": "hartree/hbar",
        },
    });
    let check = if cutoffs == standard {
        Check::at_most("zpf_closed_form", r.rel_deviation, 1e-10)
    } else {
        Check::skipped("zpf_closed_form", Relation::AtMost, 1e-10, "non-standard cutoffs")
    };
    Ok((results, vec![check]))
}

pub(crate) fn cloud(a: &CloudArgs) -> Result<Outcome, CliError> {
    if a.r_min >= a.r_max {
        return Err(CliError::Usage("--r-min must be below --r-max".into()));
    }
    let units = atomic_units();
    let spec = quadrature(&a.quadrature)?;
    let c = GaussianCloud::new(units);
    let l = c.lambda_o();
    let e = c.total_charge();
    let radii = log_grid(a.r_min * l, a.r_max * l, a.points as usize);

    // the Poisson route needs its grid to reach 0.01λ and 20λ
    let mut grid = radii.clone();
    grid.push(0.01 * l);
    grid.push(20.0 * l);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let poisson = self_potential_via_poisson(&c, &grid, &spec)?;
    let v_poisson = |rho: f64| {
        let i = grid.partition_point(|&g| g < rho);
        poisson.values()[i]
    };

    let mut rows = Vec::with_capacity(radii.len());
    let (mut born_err, mut route_diff) = (Vec::new(), Vec::new());
    for &rho in &radii {
        let f = charge_density(&c, rho)?;
        let psi = oscillator_ground_amplitude(&c, rho)?;
        let born = (psi * psi - f).abs() / f;
        let v_erf = self_potential(&c, rho)?;
        let v_p = v_poisson(rho);
        let diff = (v_p - v_erf).abs() / v_erf.abs();
        born_err.push(born);
        if (0.1 * l..=10.0 * l).contains(&rho) {
            route_diff.push(diff);
        }
        rows.push(json!({
            "rho": rho,
            "rho_over_lambda": rho / l,
            "density": f,
            "psi_square": psi * psi,
            "born_rel_error": born,
            "v_erf": v_erf,
            "v_poisson": v_p,
            "route_rel_diff": diff,
        }));
    }
    // ϱV(ϱ) + e beyond 10λ: erf route on a fixed grid, Poisson route on its own grid
    let mut far = Vec::new();
    for rho in log_grid(10.0 * l, 100.0 * l, 50) {
        far.push((rho * self_potential(&c, rho)? + e).abs());
    }
    for (&rho, &v) in grid.iter().zip(poisson.values()) {
        if rho >= 10.0 * l {
            far.push((rho * v + e).abs());
        }
    }
    let far_field = max_of(far);

    let numeric = self_energy(&c, &spec)?;
    let closed = self_energy_closed(&c);
    let self_energy_err = (numeric - closed).abs() / closed;
    let budget = energy_budget_compare(&units);
    let expected_ratio = (std::f64::consts::PI / 3.0).sqrt();
    let born_max = max_of(born_err);
    let route_max = max_of(route_diff.iter().copied());

    let results = json!({
        "lambda_o": l,
        "peak_density": charge_density(&c, 0.0)?,
        "self_energy": numeric,
        "self_energy_closed": closed,
        "self_energy_alpha_form": self_energy_closed_alpha_form(&units),
        "self_energy_rel_error": self_energy_err,
        "e_kinetic": budget.e_kinetic,
        "ratio": budget.ratio,
        "ratio_expected": expected_ratio,
        "rel_difference": budget.rel_difference,
        "max_born_rel_error": born_max,
        "max_route_rel_diff": route_max,
        "far_field_max": far_field,
        "profile": rows,
        "unit_labels": {
            "lambda_o": "bohr",
            "peak_density": "e/bohr^3",
            "self_energy": "hartree",
            "self_energy_closed": "hartree",
            "self_energy_alpha_form": "hartree",
            "e_kinetic": "hartree",
            "ratio": "dimensionless",
            "rel_difference": "dimensionless",
            "far_field_max": "e",
            "profile.rho": "bohr",
            "profile.density": "e/bohr^3",
            "profile.psi_square": "1/bohr^3",
            "profile.v_erf": "hartree/e",
            "profile.v_poisson": "hartree/e",
        },
    });
    let route_check = if route_diff.is_empty() {
        Check::skipped("self_potential_dual_route", Relation::AtMost, 1e-6, "no radii in [0.1, 10] lambda_o")
    } else {
        Check::at_most("self_potential_dual_route", route_max, 1e-6)
    };
    let checks = vec![
        Check::at_most("born_identity", born_max, 1e-12),
        route_check,
        Check::at_most("far_field", far_field, 1e-10),
        Check::at_most("self_energy_closed_form", self_energy_err, 1e-8),
        Check::at_most("budget_ratio", (budget.ratio - expected_ratio).abs(), 1e-9),
    ];
    Ok((results, checks))
}

pub(crate) fn build_state(a: &SimulateArgs, units: UnitSystem) -> Result<WaveState, CliError> {
    Ok(match a.state {
        StateArg::Hydrogen => WaveState::hydrogen_1s(a.z, units)?,
        StateArg::Harmonic => WaveState::harmonic_ground(a.omega, a.dims as usize, units)?,
        StateArg::PlaneWave => WaveState::plane_wave(a.k, units)?,
    })
}

/// Variance of `x` (1-D) or mean of `r²` (3-D) in the Born law.
fn born_second_moment(state: &WaveState) -> Option<f64> {
    let l = state.length_scale();
    match state.kind() {
        StateKind::Hydrogen1s { .. } => Some(3.0 * l * l),
        StateKind::HarmonicGround { dimensions, .. } => Some(dimensions as f64 * l * l / 2.0),
        StateKind::PlaneWave { .. } => None,
    }
}

fn histogram_range(state: &WaveState, samples: &[f64]) -> (f64, f64) {
    let l = state.length_scale();
    match state.kind() {
        StateKind::Hydrogen1s { .. } => (0.0, 8.0 * l),
        StateKind::HarmonicGround { dimensions: 1, .. } => (-4.0 * l, 4.0 * l),
        StateKind::HarmonicGround { .. } => (0.0, 4.0 * l),
        StateKind::PlaneWave { .. } => {
            let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (lo, hi + 1e-9 * (hi - lo))
            } else {
                (lo - 0.5, lo + 0.5)
            }
        }
    }
}

fn point_on_axis(state: &WaveState, q: f64) -> Vec<f64> {
    if state.dimensions() == 1 {
        vec![q]
    } else {
        vec![0.0, 0.0, q]
    }
}

pub(crate) fn config_from(a: &SimulateArgs) -> SimulationConfig {
    SimulationConfig {
        n_paths: a.paths as usize,
        n_steps: a.steps as usize,
        dt: a.dt,
        burn_in_steps: a.burn_in as usize,
        master_seed: a.seed,
        record_stride: a.stride as usize,
        diffusion_scale: a.diffusion_scale,
        workers: a.workers.map(|w| w as usize),
        ..Default::default()
    }
}

fn histogram(ens: &TrajectoryEnsemble, bins: &Binning, samples: &[f64]) -> Vec<Value> {
    let mut counts = vec![0usize; bins.n_bins];
    for &q in samples {
        if let Some(i) = bins.index(q) {
            counts[i] += 1;
        }
    }
    let w = bins.width();
    let n = samples.len() as f64;
    bins.centers()
        .iter()
        .zip(&counts)
        .map(|(&c, &k)| {
            let lo = c - w / 2.0;
            let born = ens
                .state
                .born_cdf(lo + w)
                .zip(ens.state.born_cdf(lo))
                .map(|(b, a)| (b - a) / w);
            json!({ "center": c, "count": k, "density": k as f64 / (n * w), "born_density": born })
        })
        .collect()
}

pub(crate) fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let units = atomic_units();
    let state = build_state(a, units)?;
    let ens = simulate_ensemble(&state, &config_from(a))?;
    let last = ens.n_records() - 1;
    let final_q = ens.coordinate_samples(last);
    let n = final_q.len() as f64;

    let ks = if state.is_normalizable() {
        Some(ens.ks_by_record()?)
    } else {
        None
    };
    let ks_final = ks.as_ref().map(|k| k[last]);
    let ks_max = ks.as_ref().map(|k| max_of(k.iter().copied()));
    let mean = final_q.iter().sum::<f64>() / n;
    let second = if state.dimensions() == 1 {
        final_q.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)
    } else {
        final_q.iter().map(|q| q * q).sum::<f64>() / n
    };

    let (lo, hi) = histogram_range(&state, &final_q);
    let bins = Binning::new(lo, hi, a.bins as usize)?;
    let hist = histogram(&ens, &bins, &final_q);

    let lag = a.lag as usize;
    let velocities = if ens.n_records() > 2 * lag {
        let est = estimate_velocities_from_paths(&ens, &bins, lag)?;
        let mut rows = Vec::with_capacity(bins.n_bins);
        for i in 0..bins.n_bins {
            let c = est.bin_centers[i];
            let x = point_on_axis(&state, c);
            let component = state.dimensions() - 1;
            let analytic = forward_backward_velocities(&state, &x).ok().map(|(p, m)| {
                (p[component], m[component])
            });
            let se = est.std_errors[i];
            rows.push(json!({
                "center": c,
                "count": est.counts[i],
                "v_plus": est.v_plus[i],
                "v_minus": est.v_minus[i],
                "current": est.current_est[i],
                "osmotic_drift": est.osmotic_est[i],
                "current_se": se.map(|e| e.current),
                "osmotic_drift_se": se.map(|e| e.osmotic),
                "analytic_current": analytic.map(|(p, m)| (p + m) / 2.0),
                "analytic_osmotic_drift": analytic.map(|(p, m)| (p - m) / 2.0),
            }));
        }
        Value::Array(rows)
    } else {
        Value::Null
    };

    let total_time = a.steps as f64 * a.dt;
    let mut checks = Vec::new();
    if let Some(ks) = ks_final {
        checks.push(if ens.n_paths() >= KS_MIN_PATHS {
            Check::at_most("born_ks_final", ks, KS_THRESHOLD)
        } else {
            Check::skipped("born_ks_final", Relation::AtMost, KS_THRESHOLD, "underpowered")
        });
    }
    let mut drift = Value::Null;
    if let StateKind::PlaneWave { k } = state.kind() {
        // mean displacement against v·T, in standard errors of the free spread
        let first = ens.coordinate_samples(0);
        let shift = final_q.iter().zip(&first).map(|(b, a)| b - a).sum::<f64>() / n;
        let expected = units.hbar() * k / units.mass() * total_time;
        let spread = (2.0 * state.diffusion_coefficient() * a.diffusion_scale * total_time).sqrt();
        let z = if spread > 0.0 {
            (shift - expected).abs() / (spread / n.sqrt())
        } else {
            (shift - expected).abs() / (1e-12 * expected.abs().max(1.0))
        };
        drift = json!({ "mean_shift": shift, "expected_shift": expected, "z_score": z });
        checks.push(if ens.n_paths() >= DRIFT_MIN_PATHS {
            Check::at_most("plane_wave_drift", z, 4.0)
        } else {
            Check::skipped("plane_wave_drift", Relation::AtMost, 4.0, "underpowered")
        });
    }

    let results = json!({
        "state": {
            "kind": state.kind(),
            "dimensions": state.dimensions(),
            "energy": state.energy(),
            "length_scale": state.length_scale(),
            "diffusion_coefficient": state.diffusion_coefficient() * a.diffusion_scale,
        },
        "ensemble": {
            "n_paths": ens.n_paths(),
            "n_records": ens.n_records(),
            "record_interval": ens.record_interval(),
            "total_time": total_time,
        },
        "born": {
            "ks_final": ks_final,
            "ks_max": ks_max,
            "ks_by_record": ks,
        },
        "moments": {
            "final_mean": mean,
            "final_second_moment": second,
            "born_second_moment": born_second_moment(&state),
        },
        "drift": drift,
        "histogram": hist,
        "velocities": velocities,
        "unit_labels": {
            "state.energy": "hartree",
            "state.length_scale": "bohr",
            "state.diffusion_coefficient": "bohr^2/atomic_time",
            "ensemble.record_interval": "atomic_time",
            "ensemble.total_time": "atomic_time",
            "born.ks_final": "dimensionless",
            "moments.final_mean": "bohr",
            "moments.final_second_moment": "bohr^2",
            "moments.born_second_moment": "bohr^2",
            "histogram.center": "bohr",
            "histogram.density": "1/bohr",
            "velocities.center": "bohr",
            "velocities.v_plus": "bohr/atomic_time",
            "velocities.v_minus": "bohr/atomic_time",
            "velocities.current": "bohr/atomic_time",
            "velocities.osmotic_drift": "bohr/atomic_time",
        },
    });
    Ok((results, checks))
}

pub(crate) fn variational(a: &VariationalArgs) -> Result<Outcome, CliError> {
    let units = atomic_units();
    let r = minimize_energy(&units, a.z)?;
    let a0 = units.bohr_radius();
    let curve = if a.curve_points > 0 {
        let radii = log_grid(0.1 * r.r_opt, 10.0 * r.r_opt, (a.curve_points as usize).max(2));
        radii
            .iter()
            .take(a.curve_points as usize)
            .map(|&x| Ok(json!({ "r": x, "energy": energy_functional(&units, x, a.z)? })))
            .collect::<Result<Vec<_>, CliError>>()?
    } else {
        Vec::new()
    };
    let r_err = (r.numeric_r_opt - r.r_opt).abs() / r.r_opt;
    let e_err = (r.numeric_e_opt - r.e_opt).abs() / r.e_opt.abs();
    let e_scale = units.mass() * units.charge().powi(4) / (units.hbar() * units.hbar());
    let scaling = ((r.r_opt * a.z / a0) - 1.0).abs().max((r.e_opt / (a.z * a.z * e_scale) + 0.5).abs());
    let results = json!({
        "z": r.z,
        "r_opt": r.r_opt,
        "e_opt": r.e_opt,
        "numeric_r_opt": r.numeric_r_opt,
        "numeric_e_opt": r.numeric_e_opt,
        "p_r_dispersion": r.p_r_dispersion,
        "l_dispersion_sum": r.l_dispersion_sum,
        "printed_r_opt": r.printed_r_opt,
        "r_opt_times_z": r.r_opt * a.z,
        "e_opt_over_z_square": r.e_opt / (a.z * a.z),
        "curve": curve,
        "unit_labels": {
            "r_opt": "bohr",
            "e_opt": "hartree",
            "numeric_r_opt": "bohr",
            "numeric_e_opt": "hartree",
            "p_r_dispersion": "(hbar/bohr)^2",
            "l_dispersion_sum": "hbar^2",
            "printed_r_opt": "bohr",
            "r_opt_times_z": "bohr",
            "e_opt_over_z_square": "hartree",
            "curve.r": "bohr",
            "curve.energy": "hartree",
        },
    });
    let checks = vec![
        Check::at_most("numeric_r_opt", r_err, 1e-9),
        Check::at_most("numeric_e_opt", e_err, 1e-9),
        Check::at_most("charge_scaling", scaling, 4.0 * f64::EPSILON),
    ];
    Ok((results, checks))
}

pub(crate) fn angular(a: &AngularArgs) -> Result<Outcome, CliError> {
    let units = atomic_units();
    let h2 = units.hbar() * units.hbar();
    let reports: Vec<_> = (0..=a.l_max).map(|l| l_square_report(&units, l)).collect();
    let assembly = max_of(
        reports
            .iter()
            .filter(|r| r.l >= 1)
            .map(|r| (r.l_square_assembled - r.l_square_closed).abs() / r.l_square_closed),
    );
    let ground = &reports[0];
    let branches = (ground.l_square_assembled - 0.75 * h2).abs() + (ground.l_square_closed - 0.25 * h2).abs();
    let violations = reports
        .iter()
        .filter(|r| r.l >= 1)
        .map(|r| r.inequalities_satisfied.iter().filter(|ok| !**ok).count())
        .sum::<usize>()
        + ground.inequalities_saturated.iter().filter(|s| !**s).count();
    let results = json!({
        "table": reports,
        "unit_labels": {
            "table.lz_mean": "hbar",
            "table.dx2": "hbar^2",
            "table.dy2": "hbar^2",
            "table.dz2": "hbar^2",
            "table.l_square_assembled": "hbar^2",
            "table.l_square_closed": "hbar^2",
            "table.l_square_standard": "hbar^2",
        },
    });
    let mut checks = Vec::new();
    checks.push(if a.l_max >= 1 {
        Check::at_most("l_square_table", assembly, 1e-14)
    } else {
        Check::skipped("l_square_table", Relation::AtMost, 1e-14, "no l >= 1 rows")
    });
    checks.push(Check::at_most("l_zero_branches", branches, 1e-15));
    checks.push(Check::at_most("inequality_audit", violations as f64, 0.0));
    Ok((results, checks))
}
