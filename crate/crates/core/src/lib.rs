//! Parisian ruin of the Brownian risk model with force of interest.
//!
//! The crate simulates the discounted loss of the surplus process exactly on
//! uniform grids, detects classical and Parisian ruin, estimates the
//! Pickands-type constants that govern the large-reserve asymptotics, and
//! cross-checks the asymptotic formulas against Monte Carlo and against the
//! exact classical-ruin probability.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`, which is what the command-line front end uses.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod model;
pub mod montecarlo;
pub mod normal;
pub mod paths;
pub mod pickands;
pub mod rng;
pub mod ruin;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Real = f64;

pub type Params = model::ModelParams<Real>;
pub type Drift = model::DriftSpec<Real>;
pub type Estimate = stats::EstimateCI<Real>;
pub type Grid = paths::GridSpec<Real>;
pub type Path = paths::PathSample<Real>;
pub type Outcome = ruin::RuinOutcome<Real>;
pub type Query = pickands::PickandsQuery<Real>;
pub type Experiment = montecarlo::ExperimentConfig<Real>;
pub type Row = montecarlo::ComparisonRow<Real>;

pub type ParamsF32 = model::ModelParams<f32>;
pub type EstimateF32 = stats::EstimateCI<f32>;
pub type GridF32 = paths::GridSpec<f32>;
pub type QueryF32 = pickands::PickandsQuery<f32>;
