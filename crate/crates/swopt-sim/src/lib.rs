//! Trajectory machinery for switched systems: forward-Euler integration on
//! a partition, discretized cost and constraint evaluation, state
//! transition matrices, and the directional derivatives that feed the
//! optimality subproblem.
//!
//! All algorithm math lives on normalized time [0, 1]; models declare
//! their own horizon [t0, tf] and every operation here rescales the
//! dynamics by (tf − t0) and evaluates fields at t0 + t·(tf − t0).

mod check;
mod error;
mod gradients;
mod model;
mod stm;
mod trajectory;

pub use check::{check_jacobians, JacobianReport, ProbeRegion};
pub use error::SimError;
pub use gradients::{functional_gradients, FunctionalGradients, GradientRow};
pub use model::{DynModel, SystemModel};
pub use stm::{directional_derivative_flow, transition_stack, TransitionStack};
pub use trajectory::{constraint_eval, cost, integrate, DiscreteTrajectory, PsiEval};
