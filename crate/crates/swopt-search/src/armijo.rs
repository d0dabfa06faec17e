use swopt_core::{AlgoParams, PiecewiseControl};
use swopt_optimality::OptimalityReport;
use swopt_sim::{SimError, SystemModel};

use crate::error::SearchError;
use crate::eval::evaluate;

/// Accepted Armijo probe: the index μ, the stepped relaxed control
/// ξ + β^μ(g − ξ), and its cost and constraint values.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub mu: u32,
    pub candidate: PiecewiseControl,
    pub j_candidate: f64,
    pub psi_candidate: Option<f64>,
}

/// Backtracking step size search along the direction g − ξ. Probes
/// k = 0, 1, 2, … in order and returns the first one whose candidate
/// ξ + β^k(g − ξ) achieves the decrease αβ^kθ: from a feasible base the
/// cost must drop by that much while the constraint envelope stays below
/// it, from an infeasible base the violation itself must drop.
///
/// θ ≥ 0 means there is no descent direction to search along and is
/// rejected up front. When every probe up to `mu_cap` fails, θ was too
/// close to zero for the decrease test to be meaningful and the caller
/// should refine the mesh instead.
pub fn armijo_step(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    report: &OptimalityReport,
    params: &AlgoParams,
) -> Result<StepOutcome, SearchError> {
    if report.theta >= 0.0 {
        return Err(SearchError::ThetaNonNegative {
            theta: report.theta,
        });
    }
    let (j_base, psi_base) = evaluate(model, xi)?;
    let feasible = psi_base.map_or(true, |p| p <= 0.0);
    for k in 0..=params.mu_cap {
        let lambda = params.beta.powi(k as i32);
        let candidate = xi.step_towards(&report.direction, lambda)?;
        let (j_cand, psi_cand) = match evaluate(model, &candidate) {
            Ok(pair) => pair,
            // A probe that blows up just means the step is still too long.
            Err(SimError::NonFinite { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let slack = params.alpha * lambda * report.theta;
        let accepted = if feasible {
            j_cand - j_base <= slack && psi_cand.map_or(true, |p| p <= slack)
        } else {
            let drop = psi_cand.expect("constrained model kept its constraints") - psi_base.unwrap();
            drop <= slack
        };
        if accepted {
            log::debug!("armijo accepted mu = {k}, J = {j_cand:.6e}");
            return Ok(StepOutcome {
                mu: k,
                candidate,
                j_candidate: j_cand,
                psi_candidate: psi_cand,
            });
        }
    }
    Err(SearchError::StepCapExceeded {
        cap: params.mu_cap,
    })
}
