use nalgebra::{DMatrix, DVector};
use swopt_core::{ControlDirection, Partition, PiecewiseControl};

use crate::model::{mixed_jac_u, mixed_jac_x, phys_time, time_scale, SystemModel};
use crate::trajectory::DiscreteTrajectory;

/// Per-interval factors of the discretized state transition matrix:
/// factor_k = I + Δτ_k (tf − t0) ∂f/∂x(τ_k, z(τ_k), u(τ_k), d(τ_k)),
/// so Φ(τ_k, τ_j) is the ordered product factor_{k−1} ⋯ factor_j.
#[derive(Debug, Clone)]
pub struct TransitionStack {
    partition: Partition,
    factors: Vec<DMatrix<f64>>,
}

impl TransitionStack {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn factors(&self) -> &[DMatrix<f64>] {
        &self.factors
    }

    /// Φ(τ_k, τ_j) as the ordered factor product; Φ(τ_j, τ_j) = I from the
    /// empty product.
    pub fn phi(&self, k: usize, j: usize) -> DMatrix<f64> {
        let n = self.factors[0].nrows();
        let mut out = DMatrix::identity(n, n);
        for l in j..k {
            out = &self.factors[l] * out;
        }
        out
    }
}

pub fn transition_stack(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    traj: &DiscreteTrajectory,
) -> TransitionStack {
    let p = traj.partition().clone();
    let n = model.state_dim();
    let scale = time_scale(model);
    let mut factors = Vec::with_capacity(p.num_intervals());
    for k in 0..p.num_intervals() {
        let tau = p.samples()[k];
        let mut factor = DMatrix::identity(n, n);
        let delta = p.delta(k);
        if delta > 0.0 {
            let jx = mixed_jac_x(
                model,
                phys_time(model, tau),
                &traj.nodes()[k],
                &xi.u_values()[k],
                &xi.d_values()[k],
            );
            factor += jx * (delta * scale);
        }
        factors.push(factor);
    }
    TransitionStack {
        partition: p,
        factors,
    }
}

/// Dφ_{τ,τ_k}(ξ; ξ'):
/// Σ_{j<k} Δτ_j Φ(τ_k, τ_{j+1}) (tf − t0) [ ∂f/∂u·u'(τ_j) + Σ_i f(·, e_i) d'_i(τ_j) ],
/// accumulated forward so no Φ product is materialized.
pub fn directional_derivative_flow(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    traj: &DiscreteTrajectory,
    stack: &TransitionStack,
    dir: &ControlDirection,
    k: usize,
) -> DVector<f64> {
    let p = traj.partition();
    let n = model.state_dim();
    let scale = time_scale(model);
    let mut v = DVector::zeros(n);
    for j in 0..k {
        v = &stack.factors()[j] * v;
        let delta = p.delta(j);
        if delta <= 0.0 {
            continue;
        }
        let t = phys_time(model, p.samples()[j]);
        let z = &traj.nodes()[j];
        let u = &xi.u_values()[j];
        let d = &xi.d_values()[j];
        let mut incr = mixed_jac_u(model, t, z, u, d) * &dir.u_values()[j];
        for (i, &w) in dir.d_values()[j].iter().enumerate() {
            if w != 0.0 {
                incr.axpy(w, &model.vector_field(t, z, u, i), 1.0);
            }
        }
        v.axpy(delta * scale, &incr, 1.0);
    }
    v
}

pub(crate) fn interval_caches(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    traj: &DiscreteTrajectory,
) -> (Vec<DMatrix<f64>>, Vec<Vec<DVector<f64>>>) {
    let p = traj.partition();
    let scale = time_scale(model);
    let q = model.mode_count();
    let n = model.state_dim();
    let m = model.input_dim();
    let mut b_mats = Vec::with_capacity(p.num_intervals());
    let mut mode_fields = Vec::with_capacity(p.num_intervals());
    for k in 0..p.num_intervals() {
        let delta = p.delta(k);
        if delta <= 0.0 {
            b_mats.push(DMatrix::zeros(n, m));
            mode_fields.push(vec![DVector::zeros(n); q]);
            continue;
        }
        let t = phys_time(model, p.samples()[k]);
        let z = &traj.nodes()[k];
        let u = &xi.u_values()[k];
        let d = &xi.d_values()[k];
        let w = delta * scale;
        b_mats.push(mixed_jac_u(model, t, z, u, d) * w);
        mode_fields.push(
            (0..q)
                .map(|i| model.vector_field(t, z, u, i) * w)
                .collect(),
        );
    }
    (b_mats, mode_fields)
}

