//! Self-contained numerical kernel: quadrature, erf, scalar minimization,
//! seeded Gaussian substreams and the Kolmogorov–Smirnov statistic.

mod optimize;
mod quadrature;
mod random;
mod special;
mod stats;

use thiserror::Error;

pub use optimize::{minimize_scalar, Minimum};
pub use quadrature::{integrate, integrate_with_estimate, Quadrature, QuadratureSpec};
pub use random::{gaussian_samples, RandomStream, StreamRng};
pub use special::{erf, erfc};
pub use stats::{ks_statistic, ks_statistic_unsorted};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature tolerance not reached: estimate {estimate}, error bound {error_bound}")]
    ToleranceNotReached { estimate: f64, error_bound: f64 },
    #[error("invalid quadrature spec {0:?}")]
    InvalidSpec(QuadratureSpec),
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand produced a non-finite value")]
    NonFinite,
    #[error("invalid bracket ({lo}, {hi}): need lo < hi")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("empty sample")]
    EmptyInput,
    #[error("samples are not sorted")]
    NotSorted,
}
