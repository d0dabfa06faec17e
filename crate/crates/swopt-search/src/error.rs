use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("step search requires theta < 0, got {theta}")]
    ThetaNonNegative { theta: f64 },

    #[error("no step size accepted within {cap} backtracking probes: theta is numerically indistinguishable from zero and the caller should refine instead")]
    StepCapExceeded { cap: u32 },

    #[error(transparent)]
    Core(#[from] swopt_core::CoreError),

    #[error(transparent)]
    Sim(#[from] swopt_sim::SimError),

    #[error(transparent)]
    Project(#[from] swopt_project::ProjectError),
}
