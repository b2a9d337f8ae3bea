//! Golden-section search for a unimodal scalar function.

use super::NumericsError;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]`, shrinking the bracket until it is narrower
/// than `tol`. Only interior points are evaluated. On an exact tie the left
/// sub-bracket is kept.
///
/// Function-value comparisons cannot resolve a minimizer more finely than
/// about `sqrt(eps)` times the curvature scale, so `tol` below that only
/// buys extra evaluations.
pub fn minimize_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: (f64, f64),
    tol: f64,
) -> Result<Minimum, NumericsError> {
    let (mut a, mut b) = bracket;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NumericsError::InvalidBracket { lo: a, hi: b });
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(tol));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evaluations += 1;
        // The bracket stops shrinking once it is a few ulps wide.
        if evaluations > 10_000 {
            break;
        }
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(Minimum {
        x,
        value,
        evaluations,
    })
}
