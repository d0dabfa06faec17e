use swopt_core::PiecewiseControl;
use swopt_sim::{constraint_eval, cost, integrate, SimError, SystemModel};

/// Integrate a control and return (J, Ψ). Ψ is absent for models that
/// declare no constraints.
pub(crate) fn evaluate(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
) -> Result<(f64, Option<f64>), SimError> {
    let traj = integrate(model, xi)?;
    Ok((cost(model, &traj), constraint_eval(model, &traj).value()))
}
