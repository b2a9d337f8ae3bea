//! Numerical workbench for the stochastic model of the nonrelativistic
//! electron: vacuum kinetic energy, the Gaussian charge cloud and its
//! self-energy, trembling-motion kinematics built on the complex action, and
//! uncertainty-relation estimates of hydrogen-like ground states.
//!
//! All quantities are in Gaussian atomic units (hartree, bohr, ħ/hartree).

// reference constants keep every digit; `!(a > b)` checks reject NaN
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cloud;
pub mod kinematics;
pub mod numerics;
pub mod uncertainty;
pub mod units;
pub mod vacuum;

#[cfg(feature = "cli")]
pub mod cli;

pub use units::{atomic_units, oscillation_length, UnitSystem};
