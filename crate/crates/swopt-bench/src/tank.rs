use nalgebra::{dvector, DMatrix, DVector};
use swopt_core::{AlgoParams, Partition, PiecewiseControl};
use swopt_sim::SystemModel;

use crate::BenchmarkSpec;

const INFLOW: [f64; 2] = [1.0, 2.0];

/// Two tanks in series: the mode picks the inflow rate into the upper
/// tank and outflows follow Torricelli's law. There is no continuous
/// input. State layout is the two levels followed by the running-cost
/// accumulator for 2 (x₂ − 3)².
///
/// Levels stay nonnegative along exact trajectories, but Euler steps and
/// finite-difference probes can momentarily undershoot zero, so the
/// square roots clamp at zero. The clamped branch is constant, so its
/// slope is zero there and the Jacobian stays consistent with the field.
pub struct TankModel;

fn head(level: f64) -> f64 {
    level.max(0.0).sqrt()
}

fn head_slope(level: f64) -> f64 {
    if level > 0.0 {
        0.5 / level.sqrt()
    } else {
        0.0
    }
}

pub fn make_tank() -> (TankModel, BenchmarkSpec) {
    let partition = Partition::uniform(128).expect("nonzero interval count");
    let u = vec![DVector::zeros(0); 128];
    let d = vec![dvector![1.0, 0.0]; 128];
    let init = PiecewiseControl::pure(partition, u, d).expect("valid initial control");
    let spec = BenchmarkSpec {
        name: "tank",
        params: AlgoParams {
            alpha: 0.01,
            beta: 0.75,
            alpha_bar: 0.005,
            beta_bar: 0.72,
            gamma: 100.0,
            omega: 1e-6,
            lambda: 1e-4,
            chi: 0.25,
            eta: 2,
            n0: 6,
            theta_stop: -1e-2,
            mu_cap: 60,
            subproblem_tol: 1e-8,
        },
        init,
        expected_cost: 4.829,
    };
    (TankModel, spec)
}

impl SystemModel for TankModel {
    fn state_dim(&self) -> usize {
        3
    }

    fn input_dim(&self) -> usize {
        0
    }

    fn mode_count(&self) -> usize {
        2
    }

    fn vector_field(
        &self,
        _t: f64,
        x: &DVector<f64>,
        _u: &DVector<f64>,
        mode: usize,
    ) -> DVector<f64> {
        dvector![
            INFLOW[mode] - head(x[0]),
            head(x[0]) - head(x[1]),
            2.0 * (x[1] - 3.0) * (x[1] - 3.0)
        ]
    }

    fn jac_x(&self, _t: f64, x: &DVector<f64>, _u: &DVector<f64>, _mode: usize) -> DMatrix<f64> {
        let s0 = head_slope(x[0]);
        let s1 = head_slope(x[1]);
        let mut j = DMatrix::zeros(3, 3);
        j[(0, 0)] = -s0;
        j[(1, 0)] = s0;
        j[(1, 1)] = -s1;
        j[(2, 1)] = 4.0 * (x[1] - 3.0);
        j
    }

    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _mode: usize) -> DMatrix<f64> {
        DMatrix::zeros(3, 0)
    }

    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[2]
    }

    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        dvector![0.0, 0.0, 1.0]
    }

    fn input_box(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    fn x0(&self) -> DVector<f64> {
        DVector::zeros(3)
    }

    fn tf(&self) -> f64 {
        10.0
    }
}
