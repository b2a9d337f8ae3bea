//! Globally adaptive 15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error meets `max(abs_tol, rel_tol * |I|)`. An interval that has already been
//! bisected `max_depth` times is never split again. If only such intervals
//! remain above tolerance, or the interval budget runs out, the best estimate
//! is returned inside the error.
//!
//! A semi-infinite upper limit (`b = +inf`) is mapped onto `[0, 1)` with
//! `x = a + t / (1 - t)`.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::NumericsError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on live subintervals, independent of `max_depth`.
const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self, NumericsError> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.abs_tol.is_finite()
            && self.rel_tol.is_finite()
            && self.max_depth >= 1;
        if ok {
            Ok(())
        } else {
            Err(NumericsError::InvalidSpec(*self))
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_depth: 40,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

// Max-heap on error; ties broken by position so the order is deterministic.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Segment {}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut f1 = [0.0; 7];
    let mut f2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        f1[j] = lo;
        f2[j] = hi;
        kronrod += WGK[j] * (lo + hi);
        abs_sum += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if round_off > f64::MIN_POSITIVE {
        err = err.max(round_off);
    }
    (result, err)
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature, NumericsError> {
    let (value, error) = kronrod15(f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value,
        error,
        depth: 0,
    });
    // Segments that may not be split further.
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    // Running sums over the heap; refreshed exactly before any decision to stop.
    let mut live_value = value;
    let mut live_error = error;
    loop {
        let mut total = frozen_value + live_value;
        let mut total_err = frozen_error + live_error;
        if total_err <= spec.target(total) || heap.is_empty() {
            (live_value, live_error) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            total = frozen_value + live_value;
            total_err = frozen_error + live_error;
        }
        if !total.is_finite() {
            return Err(NumericsError::NonFinite);
        }
        if total_err <= spec.target(total) {
            return Ok(Quadrature {
                value: total,
                error: total_err,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => {
                return Err(NumericsError::ToleranceNotReached {
                    estimate: total,
                    error_bound: total_err,
                })
            }
        };
        if heap.len() + 2 > MAX_INTERVALS {
            heap.push(worst);
            let (v, e) = heap
                .iter()
                .fold((frozen_value, frozen_error), |(v, e), s| (v + s.value, e + s.error));
            return Err(NumericsError::ToleranceNotReached {
                estimate: v,
                error_bound: e,
            });
        }
        live_value -= worst.value;
        live_error -= worst.error;
        if worst.depth >= spec.max_depth {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod15(f, lo, hi);
            evaluations += 15;
            live_value += value;
            live_error += error;
            heap.push(Segment {
                a: lo,
                b: hi,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
    }
}

/// Integrates `f` over `[a, b]` where `b` may be `f64::INFINITY`.
pub fn integrate_with_estimate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature, NumericsError> {
    spec.validate()?;
    if !a.is_finite() || b.is_nan() || b == f64::NEG_INFINITY {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    if b == f64::INFINITY {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        };
        return adaptive(&mapped, 0.0, 1.0, spec);
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    adaptive(&f, a, b, spec)
}

/// Integrates `f` over `[a, b]` (`b` may be `f64::INFINITY`).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, NumericsError> {
    integrate_with_estimate(f, a, b, spec).map(|q| q.value)
}
