use std::time::Instant;

use swopt_core::{refine_onto, AlgoParams, Partition, PiecewiseControl};
use swopt_optimality::{build_subproblem, solve_theta, OptimalityError};
use swopt_project::sigma_partition;
use swopt_search::{armijo_step, frequency_search, FrequencyOutcome, SearchError};
use swopt_sim::{
    constraint_eval, cost, functional_gradients, integrate, transition_stack, SystemModel,
};

use crate::error::DriverError;
use crate::record::{Action, IterationRecord, NullSink, RecordSink, RunResult, Termination};

/// Hard ceiling on the wavelet/PWM level. 2^14 frames is far past any
/// mesh the solver needs and bounds memory on runaway refinement.
pub const LEVEL_CAP: u32 = 14;

pub fn run(
    model: &dyn SystemModel,
    params: &AlgoParams,
    init: &PiecewiseControl,
    iter_cap: usize,
) -> Result<RunResult, DriverError> {
    run_traced(model, params, init, iter_cap, &mut NullSink)
}

/// The outer loop. Each iteration measures θ on the current mesh, then
/// either stops (θ above the stop threshold), refines the mesh (θ too
/// small to act on at this level, or no PWM frequency qualified), or
/// takes the projected step ρ_ν(ξ + β^μ(g − ξ)).
///
/// The mesh level never decreases, every intermediate control is pure,
/// and each partition keeps its mesh width at or below 2^(−level).
pub fn run_traced(
    model: &dyn SystemModel,
    params: &AlgoParams,
    init: &PiecewiseControl,
    iter_cap: usize,
    sink: &mut dyn RecordSink,
) -> Result<RunResult, DriverError> {
    params.validate()?;
    if !init.is_pure() {
        return Err(DriverError::ImpureInit);
    }

    let mut xi = init.clone();
    let mut level = params.n0;
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut termination = Termination::IterCap;

    for j in 0..iter_cap {
        let started = Instant::now();
        let traj = integrate(model, &xi).map_err(|e| DriverError::Diverged {
            iteration: j,
            source: e,
        })?;
        let j_tau = cost(model, &traj);
        let psi_tau = constraint_eval(model, &traj).value();
        let stack = transition_stack(model, &xi, &traj);
        let grads = functional_gradients(model, &xi, &traj, &stack);
        let subproblem = build_subproblem(model, &xi, &grads, params.gamma);
        let (theta, report) = match solve_theta(&subproblem, params.subproblem_tol) {
            Ok(report) => (report.theta, Some(report)),
            Err(OptimalityError::SolverStall { residual, iters }) => {
                log::warn!(
                    "iteration {j}: subproblem stalled (residual {residual:.3e} after {iters} iterations), treating theta as zero"
                );
                (0.0, None)
            }
            Err(e) => return Err(e.into()),
        };

        let mut record = IterationRecord {
            j,
            level,
            samples: xi.partition().num_samples(),
            theta,
            cost: j_tau,
            psi: psi_tau,
            action: Action::Stop,
            mu: None,
            nu: None,
            wall_time: 0.0,
        };
        log::info!(
            "iteration {j}: level {level}, {} samples, theta {theta:.6e}, J {j_tau:.6e}",
            record.samples
        );

        if theta >= params.theta_stop {
            termination = Termination::ThetaStop;
            finish(&mut record, started, sink, &mut history);
            break;
        }

        let refine_gate = -params.lambda * 2f64.powf(-params.chi * level as f64);
        if theta > refine_gate {
            if level >= LEVEL_CAP {
                finish(&mut record, started, sink, &mut history);
                break;
            }
            record.action = Action::RefineThetaSmall;
            let (refined, next) = refine(&xi, level)?;
            xi = refined;
            level = next;
            finish(&mut record, started, sink, &mut history);
            continue;
        }

        let report = report.expect("a stalled solve reports theta = 0 and stops above");
        let step = match armijo_step(model, &xi, &report, params) {
            Ok(step) => step,
            Err(SearchError::StepCapExceeded { .. }) => {
                termination = Termination::StepCap;
                finish(&mut record, started, sink, &mut history);
                break;
            }
            Err(e) => {
                return Err(DriverError::Search {
                    iteration: j,
                    source: e,
                })
            }
        };
        record.mu = Some(step.mu);

        let k_max = (level + params.eta).min(LEVEL_CAP);
        let outcome = frequency_search(model, &xi, &report, &step, k_max, params).map_err(|e| {
            DriverError::Search {
                iteration: j,
                source: e,
            }
        })?;
        match outcome {
            FrequencyOutcome::Infinite => {
                if level >= LEVEL_CAP {
                    finish(&mut record, started, sink, &mut history);
                    break;
                }
                record.action = Action::RefineNuInfeasible;
                let (refined, next) = refine(&xi, level)?;
                xi = refined;
                level = next;
                finish(&mut record, started, sink, &mut history);
            }
            FrequencyOutcome::Finite {
                nu,
                projected,
                new_partition,
                ..
            } => {
                record.action = Action::Step;
                record.nu = Some(nu);
                if nu >= level {
                    xi = projected;
                    level = nu;
                } else {
                    // The step's PWM mesh is coarser than the current
                    // level commits to, so pad it back to 2^(−level).
                    let tau = new_partition.merge(&Partition::dyadic(level));
                    xi = refine_onto(&projected, &tau)?;
                }
                debug_assert!(xi.is_pure());
                finish(&mut record, started, sink, &mut history);
            }
        }
    }

    Ok(RunResult {
        final_partition: xi.partition().clone(),
        final_control: xi,
        history,
        termination,
    })
}

fn finish(
    record: &mut IterationRecord,
    started: Instant,
    sink: &mut dyn RecordSink,
    history: &mut Vec<IterationRecord>,
) {
    record.wall_time = started.elapsed().as_secs_f64();
    sink.record(record);
    history.push(record.clone());
}

/// Mesh refinement that keeps the control function unchanged: raise the
/// level by one, lay the switching partition of the projected weights at
/// the new level over the current mesh, and re-sample the same values.
fn refine(xi: &PiecewiseControl, level: u32) -> Result<(PiecewiseControl, u32), DriverError> {
    let next = level + 1;
    let sigma = sigma_partition(xi, next)?;
    let tau = sigma.merge(xi.partition());
    Ok((refine_onto(xi, &tau)?, next))
}
