//! Trembling-motion kinematics: complex-action decomposition of analytic
//! states, current/osmotic velocity fields, diffusion ensembles, path-based
//! velocity estimators and Hamilton–Jacobi energy balances.

mod action;
mod balance;
mod estimator;
mod simulate;
mod state;

use thiserror::Error;

use crate::numerics::NumericsError;

pub use action::{
    decompose_action, forward_backward_velocities, velocity_fields, ComplexAction, VelocityField,
};
pub use balance::{
    born_expectation, energy_budget, hamilton_jacobi_residual, mean_residual, HjVariant,
    StateEnergyBudget,
};
pub use estimator::{
    estimate_velocities_from_paths, fit_slope, richardson_extrapolate, BinErrors, Binning,
    Component, EstimatorResult,
};
pub use simulate::{
    simulate_ensemble, SimulationConfig, TrajectoryEnsemble, DEFAULT_STEP_BUDGET, HYDROGEN_FLOOR,
    MAX_STEP_RATE,
};
pub use state::{StateKind, WaveState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("position has {got} coordinates, state needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("position is not finite")]
    NonFinitePosition,
    #[error("amplitude vanishes numerically; S2 is undefined there")]
    ZeroAmplitude,
    #[error("field is singular at the origin")]
    SingularPoint,
    #[error("state is not normalizable")]
    NotNormalizable,
    #[error("time step {dt} too large; must be below {limit}")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("{requested} path-steps requested, budget is {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },
    #[error("ensemble has {records} records per path, estimator needs {needed}")]
    TooFewRecords { records: usize, needed: usize },
    #[error("invalid spatial binning")]
    InvalidBinning,
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
