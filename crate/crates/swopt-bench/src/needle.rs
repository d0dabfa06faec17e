use nalgebra::{dvector, DMatrix, DVector};
use swopt_core::{AlgoParams, Partition, PiecewiseControl};
use swopt_sim::SystemModel;

use crate::BenchmarkSpec;

const CURVATURE: f64 = 0.22;
const OBSTACLE_RADIUS: f64 = 2.0;
const OBSTACLES: [[f64; 3]; 3] = [[0.0, 0.0, 5.0], [1.0, 3.0, 7.0], [-2.0, 0.0, 10.0]];

/// Bevel-tip flexible needle steered through tissue. Mode 1 inserts the
/// needle at speed u₁ while the bevel bends the path with fixed
/// curvature; mode 2 spins the shaft at rate u₂, reorienting the bevel
/// without moving the tip. State layout is the tip position, then yaw,
/// pitch and roll, then the running-cost accumulator for 0.01 ‖u‖².
/// Three spherical obstacles are expressed as path constraints
/// r² − ‖p − c‖² ≤ 0, which keeps them smooth everywhere, including at
/// the sphere centers.
pub struct NeedleModel;

pub fn make_needle() -> (NeedleModel, BenchmarkSpec) {
    let partition = Partition::uniform(64).expect("nonzero interval count");
    let u = vec![dvector![0.0, 0.0]; 64];
    let d = vec![dvector![0.5, 0.5]; 64];
    let init = PiecewiseControl::relaxed(partition, u, d).expect("valid initial control");
    let spec = BenchmarkSpec {
        name: "needle",
        params: AlgoParams {
            alpha: 0.002,
            beta: 0.72,
            alpha_bar: 0.001,
            beta_bar: 0.71,
            gamma: 100.0,
            omega: 0.05,
            lambda: 1e-4,
            chi: 0.25,
            eta: 2,
            n0: 5,
            theta_stop: -1e-3,
            mu_cap: 60,
            subproblem_tol: 1e-8,
        },
        init,
        expected_cost: 0.302,
    };
    (NeedleModel, spec)
}

impl SystemModel for NeedleModel {
    fn state_dim(&self) -> usize {
        7
    }

    fn input_dim(&self) -> usize {
        2
    }

    fn mode_count(&self) -> usize {
        2
    }

    fn vector_field(
        &self,
        _t: f64,
        x: &DVector<f64>,
        u: &DVector<f64>,
        mode: usize,
    ) -> DVector<f64> {
        let running = 0.01 * (u[0] * u[0] + u[1] * u[1]);
        if mode == 1 {
            return dvector![0.0, 0.0, 0.0, 0.0, 0.0, u[1], running];
        }
        let (yaw, pitch, roll) = (x[3], x[4], x[5]);
        dvector![
            pitch.sin() * u[0],
            -pitch.cos() * yaw.sin() * u[0],
            yaw.cos() * pitch.cos() * u[0],
            CURVATURE * roll.cos() / pitch.cos() * u[0],
            CURVATURE * roll.sin() * u[0],
            -CURVATURE * roll.cos() * pitch.tan() * u[0],
            running
        ]
    }

    fn jac_x(&self, _t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(7, 7);
        if mode == 1 {
            return j;
        }
        let (yaw, pitch, roll) = (x[3], x[4], x[5]);
        let sec = 1.0 / pitch.cos();
        j[(0, 4)] = pitch.cos() * u[0];
        j[(1, 3)] = -pitch.cos() * yaw.cos() * u[0];
        j[(1, 4)] = pitch.sin() * yaw.sin() * u[0];
        j[(2, 3)] = -yaw.sin() * pitch.cos() * u[0];
        j[(2, 4)] = -yaw.cos() * pitch.sin() * u[0];
        j[(3, 4)] = CURVATURE * roll.cos() * sec * pitch.tan() * u[0];
        j[(3, 5)] = -CURVATURE * roll.sin() * sec * u[0];
        j[(4, 5)] = CURVATURE * roll.cos() * u[0];
        j[(5, 4)] = -CURVATURE * roll.cos() * sec * sec * u[0];
        j[(5, 5)] = CURVATURE * roll.sin() * pitch.tan() * u[0];
        j
    }

    fn jac_u(&self, _t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(7, 2);
        j[(6, 0)] = 0.02 * u[0];
        j[(6, 1)] = 0.02 * u[1];
        if mode == 1 {
            j[(5, 1)] = 1.0;
            return j;
        }
        let (yaw, pitch, roll) = (x[3], x[4], x[5]);
        j[(0, 0)] = pitch.sin();
        j[(1, 0)] = -pitch.cos() * yaw.sin();
        j[(2, 0)] = yaw.cos() * pitch.cos();
        j[(3, 0)] = CURVATURE * roll.cos() / pitch.cos();
        j[(4, 0)] = CURVATURE * roll.sin();
        j[(5, 0)] = -CURVATURE * roll.cos() * pitch.tan();
        j
    }

    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        let dx = [x[0] + 2.0, x[1] - 3.5, x[2] - 10.0];
        dx.iter().map(|v| v * v).sum::<f64>() + x[6]
    }

    fn terminal_cost_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        dvector![
            2.0 * (x[0] + 2.0),
            2.0 * (x[1] - 3.5),
            2.0 * (x[2] - 10.0),
            0.0,
            0.0,
            0.0,
            1.0
        ]
    }

    fn num_constraints(&self) -> usize {
        OBSTACLES.len()
    }

    fn constraint(&self, j: usize, x: &DVector<f64>) -> f64 {
        let c = &OBSTACLES[j];
        let dist_sq = (0..3).map(|i| (x[i] - c[i]) * (x[i] - c[i])).sum::<f64>();
        OBSTACLE_RADIUS * OBSTACLE_RADIUS - dist_sq
    }

    fn constraint_grad(&self, j: usize, x: &DVector<f64>) -> DVector<f64> {
        let c = &OBSTACLES[j];
        let mut g = DVector::zeros(7);
        for i in 0..3 {
            g[i] = -2.0 * (x[i] - c[i]);
        }
        g
    }

    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![
            (0.0, 5.0),
            (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        ]
    }

    fn x0(&self) -> DVector<f64> {
        DVector::zeros(7)
    }

    fn tf(&self) -> f64 {
        8.0
    }
}
