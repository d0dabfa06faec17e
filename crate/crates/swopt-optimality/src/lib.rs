//! The discretized optimality function θ_τ: assemble the min–max
//! subproblem from terminal-functional gradients and solve it exactly as a
//! second-order-cone program to recover θ_τ(ξ) and the descent direction
//! g_τ(ξ).

mod error;
mod pathmin;
mod simplex;
mod solver;
mod subproblem;

pub use error::OptimalityError;
pub use simplex::simplex_project;
pub use solver::{solve_theta, OptimalityReport};
pub use subproblem::{build_subproblem, AffineFunctional, Branch, FunctionalTag, Subproblem};
