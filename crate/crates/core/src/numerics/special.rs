//! Error function.
//!
//! `|x| <= 2`: the positive-term series
//! `erf x = (2/√π) e^{-x²} Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1))`, which has no
//! cancellation. `|x| > 2`: `erfc` from its continued fraction, evaluated
//! bottom-up at a fixed depth.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 2.0;
const FRACTION_DEPTH: usize = 120;

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// erfc(x) for x > 2 via
/// `erfc x = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`.
fn erfc_fraction(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=FRACTION_DEPTH).rev() {
        tail = x + (k as f64 / 2.0) / tail;
    }
    (-x * x).exp() / (PI.sqrt() * tail)
}

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        erf_series(ax)
    } else if ax < 6.5 {
        1.0 - erfc_fraction(ax)
    } else {
        1.0
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// Complementary error function; accurate in the tail where `1 - erf` is not.
pub fn erfc(x: f64) -> f64 {
    if x > SERIES_LIMIT {
        if x > 27.0 {
            0.0
        } else {
            erfc_fraction(x)
        }
    } else {
        1.0 - erf(x)
    }
}
