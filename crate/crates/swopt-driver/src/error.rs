use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("the initial control must be pure")]
    ImpureInit,

    #[error("trajectory diverged at iteration {iteration}: {source}")]
    Diverged {
        iteration: usize,
        #[source]
        source: swopt_sim::SimError,
    },

    #[error("search failed at iteration {iteration}: {source}")]
    Search {
        iteration: usize,
        #[source]
        source: swopt_search::SearchError,
    },

    #[error(transparent)]
    Core(#[from] swopt_core::CoreError),

    #[error(transparent)]
    Project(#[from] swopt_project::ProjectError),

    #[error(transparent)]
    Optimality(#[from] swopt_optimality::OptimalityError),
}
