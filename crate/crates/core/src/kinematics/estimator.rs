//! Forward/backward velocities recovered from recorded paths.
//!
//! Pathwise difference quotients diverge as the lag shrinks, so the estimator
//! is conditional: for `X(t)` in a bin,
//! `v₊ ≈ E[(X(t+Δ) − X(t))/Δ]` and `v₋ ≈ E[(X(t) − X(t−Δ))/Δ]`, pooled over
//! paths and recorded times. 3D ensembles are binned in |x| and the velocities
//! projected on the radial unit vector at `X(t)`. Standard errors are
//! clustered by path, since quotients from the same path overlap.

use serde::Serialize;

use super::simulate::{coordinate, TrajectoryEnsemble};
use super::KinematicsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Binning {
    pub lo: f64,
    pub hi: f64,
    pub n_bins: usize,
}

impl Binning {
    pub fn new(lo: f64, hi: f64, n_bins: usize) -> Result<Self, KinematicsError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && n_bins > 0) {
            return Err(KinematicsError::InvalidBinning);
        }
        Ok(Self { lo, hi, n_bins })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.n_bins as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_bins)
            .map(|i| self.lo + (i as f64 + 0.5) * self.width())
            .collect()
    }

    /// Bin holding `q`, if any.
    pub fn index(&self, q: f64) -> Option<usize> {
        if q < self.lo || q >= self.hi {
            return None;
        }
        Some((((q - self.lo) / self.width()) as usize).min(self.n_bins - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinErrors {
    pub v_plus: f64,
    pub v_minus: f64,
    pub current: f64,
    pub osmotic: f64,
}

/// Per-bin estimates; `None` marks a bin without enough data (fewer than two
/// contributing paths).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorResult {
    pub bin_centers: Vec<f64>,
    pub counts: Vec<usize>,
    pub lag_time: f64,
    pub v_plus: Vec<Option<f64>>,
    pub v_minus: Vec<Option<f64>>,
    pub current_est: Vec<Option<f64>>,
    pub osmotic_est: Vec<Option<f64>>,
    pub std_errors: Vec<Option<BinErrors>>,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
    cross: f64,
}

impl Moments {
    fn add(&mut self, path_sum: f64, path_count: f64) {
        self.sum += path_sum;
        self.sum_sq += path_sum * path_sum;
        self.cross += path_count * path_sum;
    }

    /// Mean and clustered standard error given `Σn_p` and `Σn_p²`.
    fn finish(&self, n: f64, n_sq: f64) -> (f64, f64) {
        let mean = self.sum / n;
        let var = (self.sum_sq - 2.0 * mean * self.cross + mean * mean * n_sq).max(0.0);
        (mean, var.sqrt() / n)
    }
}

#[derive(Clone, Copy, Default)]
struct BinAccumulator {
    count: usize,
    paths: usize,
    n_sq: f64,
    fwd: Moments,
    bwd: Moments,
    cur: Moments,
    osm: Moments,
}

/// Conditional velocity estimates at a lag of `lag` records.
pub fn estimate_velocities_from_paths(
    ens: &TrajectoryEnsemble,
    bins: &Binning,
    lag: usize,
) -> Result<EstimatorResult, KinematicsError> {
    let n_rec = ens.n_records();
    if lag == 0 || n_rec < 2 * lag + 1 {
        return Err(KinematicsError::TooFewRecords {
            records: n_rec,
            needed: 2 * lag.max(1) + 1,
        });
    }
    let dims = ens.dimensions();
    let delta = ens.record_interval() * lag as f64;
    let nb = bins.n_bins;
    let mut acc = vec![BinAccumulator::default(); nb];
    let mut local = vec![(0usize, 0.0f64, 0.0f64); nb];
    for p in 0..ens.n_paths() {
        local.fill((0, 0.0, 0.0));
        for t in lag..n_rec - lag {
            let now = ens.position(p, t);
            let Some(b) = bins.index(coordinate(now)) else {
                continue;
            };
            let before = ens.position(p, t - lag);
            let after = ens.position(p, t + lag);
            let (fwd, bwd) = if dims == 1 {
                ((after[0] - now[0]) / delta, (now[0] - before[0]) / delta)
            } else {
                let r = coordinate(now);
                let (mut f, mut g) = (0.0, 0.0);
                for j in 0..dims {
                    let unit = now[j] / r;
                    f += (after[j] - now[j]) * unit;
                    g += (now[j] - before[j]) * unit;
                }
                (f / delta, g / delta)
            };
            let slot = &mut local[b];
            slot.0 += 1;
            slot.1 += fwd;
            slot.2 += bwd;
        }
        for (a, &(n, f, g)) in acc.iter_mut().zip(&local) {
            if n == 0 {
                continue;
            }
            let nf = n as f64;
            a.count += n;
            a.paths += 1;
            a.n_sq += nf * nf;
            a.fwd.add(f, nf);
            a.bwd.add(g, nf);
            a.cur.add(0.5 * (f + g), nf);
            a.osm.add(0.5 * (f - g), nf);
        }
    }

    let mut out = EstimatorResult {
        bin_centers: bins.centers(),
        counts: acc.iter().map(|a| a.count).collect(),
        lag_time: delta,
        v_plus: vec![None; nb],
        v_minus: vec![None; nb],
        current_est: vec![None; nb],
        osmotic_est: vec![None; nb],
        std_errors: vec![None; nb],
    };
    for (i, a) in acc.iter().enumerate() {
        if a.paths < 2 {
            continue;
        }
        let n = a.count as f64;
        let (vp, se_p) = a.fwd.finish(n, a.n_sq);
        let (vm, se_m) = a.bwd.finish(n, a.n_sq);
        let (_, se_c) = a.cur.finish(n, a.n_sq);
        let (_, se_o) = a.osm.finish(n, a.n_sq);
        out.v_plus[i] = Some(vp);
        out.v_minus[i] = Some(vm);
        out.current_est[i] = Some((vp + vm) / 2.0);
        out.osmotic_est[i] = Some((vp - vm) / 2.0);
        out.std_errors[i] = Some(BinErrors {
            v_plus: se_p,
            v_minus: se_m,
            current: se_c,
            osmotic: se_o,
        });
    }
    Ok(out)
}

/// Combines estimates at lags Δ and 2Δ as `2·fine − coarse`, cancelling the
/// O(Δ) bias. Errors are combined as if the two estimates were independent.
pub fn richardson_extrapolate(
    fine: &EstimatorResult,
    coarse: &EstimatorResult,
) -> Result<EstimatorResult, KinematicsError> {
    if fine.bin_centers != coarse.bin_centers {
        return Err(KinematicsError::InvalidBinning);
    }
    let nb = fine.bin_centers.len();
    let mut out = EstimatorResult {
        bin_centers: fine.bin_centers.clone(),
        counts: fine.counts.clone(),
        lag_time: fine.lag_time,
        v_plus: vec![None; nb],
        v_minus: vec![None; nb],
        current_est: vec![None; nb],
        osmotic_est: vec![None; nb],
        std_errors: vec![None; nb],
    };
    let combine = |a: f64, b: f64| 2.0 * a - b;
    let combine_se = |a: f64, b: f64| (4.0 * a * a + b * b).sqrt();
    for i in 0..nb {
        let (Some(fp), Some(fm), Some(cp), Some(cm), Some(fe), Some(ce)) = (
            fine.v_plus[i],
            fine.v_minus[i],
            coarse.v_plus[i],
            coarse.v_minus[i],
            fine.std_errors[i],
            coarse.std_errors[i],
        ) else {
            continue;
        };
        let vp = combine(fp, cp);
        let vm = combine(fm, cm);
        out.v_plus[i] = Some(vp);
        out.v_minus[i] = Some(vm);
        out.current_est[i] = Some((vp + vm) / 2.0);
        out.osmotic_est[i] = Some((vp - vm) / 2.0);
        out.std_errors[i] = Some(BinErrors {
            v_plus: combine_se(fe.v_plus, ce.v_plus),
            v_minus: combine_se(fe.v_minus, ce.v_minus),
            current: combine_se(fe.current, ce.current),
            osmotic: combine_se(fe.osmotic, ce.osmotic),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Current,
    Osmotic,
}

/// Weighted least-squares slope through the origin of a component against
/// the bin centre, over bins with `|centre| <= max_abs`. Returns
/// `(slope, standard error)`.
pub fn fit_slope(result: &EstimatorResult, component: Component, max_abs: f64) -> Option<(f64, f64)> {
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 0..result.bin_centers.len() {
        let x = result.bin_centers[i];
        if x.abs() > max_abs {
            continue;
        }
        let (value, se) = match (component, result.std_errors[i]) {
            (Component::Current, Some(e)) => (result.current_est[i]?, e.current),
            (Component::Osmotic, Some(e)) => (result.osmotic_est[i]?, e.osmotic),
            (_, None) => continue,
        };
        if !(se > 0.0) {
            continue;
        }
        let w = 1.0 / (se * se);
        sxy += w * x * value;
        sxx += w * x * x;
    }
    if sxx > 0.0 {
        Some((sxy / sxx, 1.0 / sxx.sqrt()))
    } else {
        None
    }
}
