//! Benchmark problems for the switched-system solver: a three-mode LQR,
//! a two-tank level controller, a planar quadrotor, and a steerable
//! needle. Each builder returns the system model together with the tuned
//! algorithm parameters, the initial control, and the cost the solver is
//! expected to reach.
//!
//! Running costs are folded into the dynamics: every model appends one
//! accumulator state whose derivative is the running integrand and adds
//! its terminal value to the endpoint cost, so the solver only ever sees
//! terminal-form objectives. The accumulator never feeds back into the
//! physical states.

mod lqr;
mod needle;
mod quadrotor;
mod spec;
mod tank;

pub use lqr::{make_lqr, LqrModel};
pub use needle::{make_needle, NeedleModel};
pub use quadrotor::{make_quadrotor, QuadrotorModel};
pub use spec::{by_name, pure_init, BenchmarkSpec, NAMES};
pub use tank::{make_tank, TankModel};
