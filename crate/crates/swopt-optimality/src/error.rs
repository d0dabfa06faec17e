use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimalityError {
    #[error(
        "subproblem solver stalled at residual {residual:.3e} after {iters} iterations; \
         the caller should treat θ as numerically zero"
    )]
    SolverStall { residual: f64, iters: usize },

    #[error(transparent)]
    Core(#[from] swopt_core::CoreError),
}
