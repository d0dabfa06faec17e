use swopt_core::{AlgoParams, PiecewiseControl};
use swopt_project::{rho, ProjectError};
use swopt_sim::{DynModel, SystemModel};

use crate::{make_lqr, make_needle, make_quadrotor, make_tank};

/// Names accepted by [`by_name`], in a stable order for error messages.
pub const NAMES: [&str; 4] = ["lqr", "tank", "quadrotor", "needle"];

/// Everything needed to reproduce a benchmark run besides the model
/// itself: tuned parameters, the published starting control, and the
/// cost the solver is expected to reach.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub name: &'static str,
    pub params: AlgoParams,
    pub init: PiecewiseControl,
    pub expected_cost: f64,
}

/// Looks a benchmark up by its name.
pub fn by_name(name: &str) -> Option<(DynModel, BenchmarkSpec)> {
    match name {
        "lqr" => {
            let (m, s) = make_lqr();
            Some((Box::new(m), s))
        }
        "tank" => {
            let (m, s) = make_tank();
            Some((Box::new(m), s))
        }
        "quadrotor" => {
            let (m, s) = make_quadrotor();
            Some((Box::new(m), s))
        }
        "needle" => {
            let (m, s) = make_needle();
            Some((Box::new(m), s))
        }
        _ => None,
    }
}

/// The descent loop needs a pure starting point, but two benchmarks
/// publish relaxed initial weights. Those are pushed through the
/// wavelet/PWM projection once, at the spec's initial mesh level, before
/// the run starts; pure initializations pass through unchanged.
pub fn pure_init(
    model: &dyn SystemModel,
    spec: &BenchmarkSpec,
) -> Result<PiecewiseControl, ProjectError> {
    if spec.init.is_pure() {
        return Ok(spec.init.clone());
    }
    let (projected, _) = rho(&spec.init, spec.params.n0, &model.input_box())?;
    log::info!(
        "{}: relaxed initialization projected to a pure control at level {} ({} samples)",
        spec.name,
        spec.params.n0,
        projected.partition().num_samples()
    );
    Ok(projected)
}
