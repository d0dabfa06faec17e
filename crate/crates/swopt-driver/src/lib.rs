//! The outer optimization loop: repeatedly measure optimality on the
//! current mesh, either refine the mesh or take a projected descent step,
//! and log one record per iteration.

mod error;
mod record;
mod run;

pub use error::DriverError;
pub use record::{
    feasibility_monitor, Action, IterationRecord, NullSink, RecordSink, RunResult, Termination,
};
pub use run::{run, run_traced, LEVEL_CAP};
