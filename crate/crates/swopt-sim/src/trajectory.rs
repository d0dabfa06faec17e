use nalgebra::DVector;
use swopt_core::{Partition, PiecewiseControl};

use crate::model::{mixed_field, phys_time, time_scale, SystemModel};
use crate::SimError;

const BLOWUP_LIMIT: f64 = 1e12;

/// Euler node states z(τ_k) on a partition, plus linear interpolation
/// between them.
#[derive(Debug, Clone)]
pub struct DiscreteTrajectory {
    partition: Partition,
    nodes: Vec<DVector<f64>>,
}

impl DiscreteTrajectory {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn nodes(&self) -> &[DVector<f64>] {
        &self.nodes
    }

    pub fn final_state(&self) -> &DVector<f64> {
        self.nodes.last().unwrap()
    }

    /// Linear interpolation between the bracketing nodes; on a zero-length
    /// interval both nodes coincide and the shared node is returned.
    pub fn interpolate(&self, t: f64) -> Result<DVector<f64>, SimError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SimError::OutOfRange { t });
        }
        let k = self.partition.interval_containing(t);
        let delta = self.partition.delta(k);
        if delta <= 0.0 {
            return Ok(self.nodes[k].clone());
        }
        let w = ((t - self.partition.samples()[k]) / delta).clamp(0.0, 1.0);
        Ok(&self.nodes[k] * (1.0 - w) + &self.nodes[k + 1] * w)
    }
}

fn check_dims(model: &dyn SystemModel, xi: &PiecewiseControl) -> Result<(), SimError> {
    if xi.input_dim() != model.input_dim() {
        return Err(SimError::DimensionMismatch {
            what: "control input dimension",
            expected: model.input_dim(),
            got: xi.input_dim(),
        });
    }
    if xi.mode_count() != model.mode_count() {
        return Err(SimError::DimensionMismatch {
            what: "control mode count",
            expected: model.mode_count(),
            got: xi.mode_count(),
        });
    }
    if model.x0().len() != model.state_dim() {
        return Err(SimError::DimensionMismatch {
            what: "initial state dimension",
            expected: model.state_dim(),
            got: model.x0().len(),
        });
    }
    Ok(())
}

/// Forward Euler on the control's partition:
/// z(τ_{k+1}) = z(τ_k) + Δτ_k (tf − t0) Σ_i d_i(τ_k) f(t0 + τ_k(tf − t0), z(τ_k), u(τ_k), e_i).
pub fn integrate(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
) -> Result<DiscreteTrajectory, SimError> {
    check_dims(model, xi)?;
    let p = xi.partition().clone();
    let scale = time_scale(model);
    let mut nodes = Vec::with_capacity(p.num_samples());
    let mut z = model.x0();
    nodes.push(z.clone());
    for k in 0..p.num_intervals() {
        let tau = p.samples()[k];
        let delta = p.delta(k);
        if delta > 0.0 {
            let f = mixed_field(
                model,
                phys_time(model, tau),
                &z,
                &xi.u_values()[k],
                &xi.d_values()[k],
            );
            z.axpy(delta * scale, &f, 1.0);
        }
        if z.iter().any(|v| !v.is_finite() || v.abs() > BLOWUP_LIMIT) {
            return Err(SimError::NonFinite {
                sample: k + 1,
                time: p.samples()[k + 1],
            });
        }
        nodes.push(z.clone());
    }
    Ok(DiscreteTrajectory {
        partition: p,
        nodes,
    })
}

/// Discretized cost J_τ(ξ) = h_0(z(1)).
pub fn cost(model: &dyn SystemModel, traj: &DiscreteTrajectory) -> f64 {
    model.terminal_cost(traj.final_state())
}

/// Node-wise constraint evaluation.
#[derive(Debug, Clone)]
pub enum PsiEval {
    /// The model has no constraint functions; Ψ_τ is undefined and the
    /// algorithm treats every iterate as feasible.
    Unconstrained,
    Max {
        /// Ψ_τ(ξ) = max_{j,k} h_j(z(τ_k)).
        value: f64,
        /// Lexicographically least maximizing pair (j, k).
        arg_j: usize,
        arg_k: usize,
        /// values[j][k] = h_j(z(τ_k)).
        values: Vec<Vec<f64>>,
    },
}

impl PsiEval {
    pub fn value(&self) -> Option<f64> {
        match self {
            PsiEval::Unconstrained => None,
            PsiEval::Max { value, .. } => Some(*value),
        }
    }

    /// Feasibility of the iterate: no constraints, or Ψ_τ ≤ 0.
    pub fn is_feasible(&self) -> bool {
        self.value().map_or(true, |v| v <= 0.0)
    }
}

/// Evaluates every constraint at every node. Ties in the maximum are
/// broken toward the lexicographically least (j, k).
pub fn constraint_eval(model: &dyn SystemModel, traj: &DiscreteTrajectory) -> PsiEval {
    let jn = model.num_constraints();
    if jn == 0 {
        return PsiEval::Unconstrained;
    }
    let mut values = Vec::with_capacity(jn);
    let mut best = f64::NEG_INFINITY;
    let mut arg = (0usize, 0usize);
    for j in 0..jn {
        let row: Vec<f64> = traj
            .nodes()
            .iter()
            .map(|z| model.constraint(j, z))
            .collect();
        for (k, &v) in row.iter().enumerate() {
            if v > best {
                best = v;
                arg = (j, k);
            }
        }
        values.push(row);
    }
    PsiEval::Max {
        value: best,
        arg_j: arg.0,
        arg_k: arg.1,
        values,
    }
}
