//! Derivative-free minimization of black-box functions over a product of unit
//! simplices of possibly different sizes.
//!
//! The search space is `Δ^{n_1 - 1} × … × Δ^{n_B - 1}`: a [`BlockPoint`] holds
//! one probability vector per block. [`Gcdvsms`] minimizes any
//! [`SimplexObjective`] over it by greedy coordinate moves with step sizes that
//! shrink until feasible and decay when progress stalls, restarting runs from
//! the previous solution until they stop improving.
//!
//! The [`benchmarks`] module lifts classic box-constrained test functions onto
//! simplex blocks for experiments.

// `!(x > y)` is used throughout so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod engine;
mod error;
pub mod objective;
mod point;
pub mod simplex;

pub use engine::{
    shrink_until_feasible, Gcdvsms, Iteration, Move, OptimizeResult, OptimizeStop, RunResult, RunStop,
    ShrinkResult, StepState, TraceRecord, TuningParams,
};
pub use error::{Error, Result};
pub use objective::{Counted, FnObjective, SimplexObjective};
pub use point::{BlockPoint, BlockShape};
pub use simplex::{sample_uniform, sample_uniform_with, Direction, FEASIBILITY_TOL};
