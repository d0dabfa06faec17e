//! Shared domain types for the switched-system solver: time partitions,
//! piecewise-constant controls, search directions, algorithm parameters,
//! and the norms used by the descent and projection machinery.
//!
//! Everything here is an immutable value after construction and can be
//! shared freely across threads.

mod control;
mod error;
mod ops;
mod params;
mod partition;

pub use control::{ControlDirection, PiecewiseControl, Purity, SIMPLEX_TOL};
pub use error::CoreError;
pub use ops::{bv_seminorm, refine_onto, x_norm};
pub use params::AlgoParams;
pub use partition::{Partition, TIME_EQ_TOL};
