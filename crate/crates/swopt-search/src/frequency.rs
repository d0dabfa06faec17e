use swopt_core::{AlgoParams, Partition, PiecewiseControl};
use swopt_optimality::OptimalityReport;
use swopt_project::rho;
use swopt_sim::{SimError, SystemModel};

use crate::armijo::StepOutcome;
use crate::error::SearchError;
use crate::eval::evaluate;

/// Result of the PWM frequency search: the accepted level together with
/// the projected pure control and its switching partition, or the marker
/// that no level up to k_max qualified.
#[derive(Debug, Clone)]
pub enum FrequencyOutcome {
    Finite {
        nu: u32,
        projected: PiecewiseControl,
        new_partition: Partition,
        j_proj: f64,
        psi_proj: Option<f64>,
    },
    Infinite,
}

impl FrequencyOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, FrequencyOutcome::Finite { .. })
    }
}

/// Search for the PWM level that carries the stepped relaxed control
/// ξ' = ξ + β^μ(g − ξ) back to a pure control without giving up the
/// step's decrease. Levels k = 0..=k_max are probed in order, and a level
/// is examined only once the frequency gate ᾱβ̄^k ≤ (1−ω)αβ^μ holds;
/// below that level nothing is projected or integrated. A gated level is
/// accepted when ρ_k(ξ'), integrated on its own switching partition,
/// still achieves the decrease (αβ^μ − ᾱβ̄^k)θ against the base values
/// of ξ, with the same feasible/infeasible branching as the step search.
pub fn frequency_search(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    report: &OptimalityReport,
    step: &StepOutcome,
    k_max: u32,
    params: &AlgoParams,
) -> Result<FrequencyOutcome, SearchError> {
    let mu_scale = params.alpha * params.beta.powi(step.mu as i32);
    let gate_bound = (1.0 - params.omega) * mu_scale;
    let gate = |k: u32| params.alpha_bar * params.beta_bar.powi(k as i32);
    // β̄ < 1, so once a level clears the gate every later one does too.
    let Some(first) = (0..=k_max).find(|&k| gate(k) <= gate_bound) else {
        return Ok(FrequencyOutcome::Infinite);
    };
    let (j_base, psi_base) = evaluate(model, xi)?;
    let feasible = psi_base.map_or(true, |p| p <= 0.0);
    let input_box = model.input_box();
    for k in first..=k_max {
        let (projected, partition) = rho(&step.candidate, k, &input_box)?;
        let (j_proj, psi_proj) = match evaluate(model, &projected) {
            Ok(pair) => pair,
            Err(SimError::NonFinite { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let slack = (mu_scale - gate(k)) * report.theta;
        let accepted = if feasible {
            j_proj - j_base <= slack && psi_proj.map_or(true, |p| p <= slack)
        } else {
            let drop = psi_proj.expect("constrained model kept its constraints") - psi_base.unwrap();
            drop <= slack
        };
        if accepted {
            log::debug!("frequency search accepted nu = {k}, J = {j_proj:.6e}");
            return Ok(FrequencyOutcome::Finite {
                nu: k,
                projected,
                new_partition: partition,
                j_proj,
                psi_proj,
            });
        }
    }
    Ok(FrequencyOutcome::Infinite)
}
