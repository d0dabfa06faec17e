use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::model::SystemModel;

/// Sampling region for randomized derivative checks. Models with
/// singularities (square roots at zero, secants near ±π/2) should pick
/// bounds that keep probes away from them.
#[derive(Debug, Clone)]
pub struct ProbeRegion {
    pub x_lo: DVector<f64>,
    pub x_hi: DVector<f64>,
    pub u_lo: DVector<f64>,
    pub u_hi: DVector<f64>,
    pub t_lo: f64,
    pub t_hi: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct JacobianReport {
    pub max_rel_err_jac_x: f64,
    pub max_rel_err_jac_u: f64,
    pub max_rel_err_cost_grad: f64,
    pub max_rel_err_constraint_grad: f64,
}

impl JacobianReport {
    pub fn worst(&self) -> f64 {
        self.max_rel_err_jac_x
            .max(self.max_rel_err_jac_u)
            .max(self.max_rel_err_cost_grad)
            .max(self.max_rel_err_constraint_grad)
    }
}

const FD_STEP: f64 = 1e-6;

fn rel_err_mat(fd: &DMatrix<f64>, an: &DMatrix<f64>) -> f64 {
    let denom = an.norm().max(1.0);
    (fd - an).norm() / denom
}

fn rel_err_vec(fd: &DVector<f64>, an: &DVector<f64>) -> f64 {
    let denom = an.norm().max(1.0);
    (fd - an).norm() / denom
}

/// Central finite differences of the mode fields, terminal cost, and
/// constraints at `samples` random probes; returns the worst relative
/// errors against the model's analytic derivatives.
pub fn check_jacobians(
    model: &dyn SystemModel,
    region: &ProbeRegion,
    samples: usize,
    seed: u64,
) -> JacobianReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.state_dim();
    let m = model.input_dim();
    let mut report = JacobianReport {
        max_rel_err_jac_x: 0.0,
        max_rel_err_jac_u: 0.0,
        max_rel_err_cost_grad: 0.0,
        max_rel_err_constraint_grad: 0.0,
    };
    for _ in 0..samples {
        let x = DVector::from_fn(n, |i, _| rng.gen_range(region.x_lo[i]..=region.x_hi[i]));
        let u = DVector::from_fn(m, |i, _| rng.gen_range(region.u_lo[i]..=region.u_hi[i]));
        let t = rng.gen_range(region.t_lo..=region.t_hi);

        for mode in 0..model.mode_count() {
            let mut fd_x = DMatrix::zeros(n, n);
            for c in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[c] += FD_STEP;
                xm[c] -= FD_STEP;
                let col = (model.vector_field(t, &xp, &u, mode)
                    - model.vector_field(t, &xm, &u, mode))
                    / (2.0 * FD_STEP);
                fd_x.set_column(c, &col);
            }
            let an_x = model.jac_x(t, &x, &u, mode);
            report.max_rel_err_jac_x = report.max_rel_err_jac_x.max(rel_err_mat(&fd_x, &an_x));

            let mut fd_u = DMatrix::zeros(n, m);
            for c in 0..m {
                let mut up = u.clone();
                let mut um = u.clone();
                up[c] += FD_STEP;
                um[c] -= FD_STEP;
                let col = (model.vector_field(t, &x, &up, mode)
                    - model.vector_field(t, &x, &um, mode))
                    / (2.0 * FD_STEP);
                fd_u.set_column(c, &col);
            }
            let an_u = model.jac_u(t, &x, &u, mode);
            report.max_rel_err_jac_u = report.max_rel_err_jac_u.max(rel_err_mat(&fd_u, &an_u));
        }

        let mut fd_h = DVector::zeros(n);
        for c in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[c] += FD_STEP;
            xm[c] -= FD_STEP;
            fd_h[c] = (model.terminal_cost(&xp) - model.terminal_cost(&xm)) / (2.0 * FD_STEP);
        }
        report.max_rel_err_cost_grad = report
            .max_rel_err_cost_grad
            .max(rel_err_vec(&fd_h, &model.terminal_cost_grad(&x)));

        for j in 0..model.num_constraints() {
            let mut fd_g = DVector::zeros(n);
            for c in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[c] += FD_STEP;
                xm[c] -= FD_STEP;
                fd_g[c] = (model.constraint(j, &xp) - model.constraint(j, &xm)) / (2.0 * FD_STEP);
            }
            report.max_rel_err_constraint_grad = report
                .max_rel_err_constraint_grad
                .max(rel_err_vec(&fd_g, &model.constraint_grad(j, &x)));
        }
    }
    report
}
