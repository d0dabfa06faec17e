use nalgebra::{dvector, DMatrix, DVector};
use swopt_core::{AlgoParams, Partition, PiecewiseControl};
use swopt_sim::SystemModel;

use crate::BenchmarkSpec;

const ARM: f64 = 0.3050;
const MASS: f64 = 1.3000;
const INERTIA: f64 = 0.0605;
const GRAV: f64 = 9.8000;

/// Planar quadrotor with three maneuvers: thrust along the body axis,
/// and torque-only rolls in either direction. State layout is
/// (horizontal, vertical, roll) positions, then the matching velocities,
/// then the running-cost accumulator for 5 u². A single path constraint
/// keeps the craft above the ground.
pub struct QuadrotorModel;

pub fn make_quadrotor() -> (QuadrotorModel, BenchmarkSpec) {
    let partition = Partition::uniform(64).expect("nonzero interval count");
    let u = vec![dvector![5e-4]; 64];
    let d = vec![dvector![0.33, 0.34, 0.33]; 64];
    let init = PiecewiseControl::relaxed(partition, u, d).expect("valid initial control");
    let spec = BenchmarkSpec {
        name: "quadrotor",
        params: AlgoParams {
            alpha: 0.01,
            beta: 0.80,
            alpha_bar: 5e-4,
            beta_bar: 0.72,
            gamma: 10.0,
            omega: 1e-6,
            lambda: 1e-4,
            chi: 0.25,
            eta: 2,
            n0: 5,
            theta_stop: -1e-4,
            mu_cap: 60,
            subproblem_tol: 1e-8,
        },
        init,
        expected_cost: 0.128,
    };
    (QuadrotorModel, spec)
}

impl SystemModel for QuadrotorModel {
    fn state_dim(&self) -> usize {
        7
    }

    fn input_dim(&self) -> usize {
        1
    }

    fn mode_count(&self) -> usize {
        3
    }

    fn vector_field(
        &self,
        _t: f64,
        x: &DVector<f64>,
        u: &DVector<f64>,
        mode: usize,
    ) -> DVector<f64> {
        let roll = x[2];
        let (ah, av, ar) = match mode {
            0 => (
                roll.sin() / MASS * (u[0] + MASS * GRAV),
                roll.cos() / MASS * (u[0] + MASS * GRAV) - GRAV,
                0.0,
            ),
            1 => (
                GRAV * roll.sin(),
                GRAV * roll.cos() - GRAV,
                -ARM * u[0] / INERTIA,
            ),
            _ => (
                GRAV * roll.sin(),
                GRAV * roll.cos() - GRAV,
                ARM * u[0] / INERTIA,
            ),
        };
        dvector![x[3], x[4], x[5], ah, av, ar, 5.0 * u[0] * u[0]]
    }

    fn jac_x(&self, _t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64> {
        let roll = x[2];
        let mut j = DMatrix::zeros(7, 7);
        j[(0, 3)] = 1.0;
        j[(1, 4)] = 1.0;
        j[(2, 5)] = 1.0;
        match mode {
            0 => {
                j[(3, 2)] = roll.cos() / MASS * (u[0] + MASS * GRAV);
                j[(4, 2)] = -roll.sin() / MASS * (u[0] + MASS * GRAV);
            }
            _ => {
                j[(3, 2)] = GRAV * roll.cos();
                j[(4, 2)] = -GRAV * roll.sin();
            }
        }
        j
    }

    fn jac_u(&self, _t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64> {
        let roll = x[2];
        let mut j = DMatrix::zeros(7, 1);
        match mode {
            0 => {
                j[(3, 0)] = roll.sin() / MASS;
                j[(4, 0)] = roll.cos() / MASS;
            }
            1 => j[(5, 0)] = -ARM / INERTIA,
            _ => j[(5, 0)] = ARM / INERTIA,
        }
        j[(6, 0)] = 10.0 * u[0];
        j
    }

    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        let dh = x[0] - 6.0;
        let dv = x[1] - 1.0;
        let half_roll = (x[2] / 2.0).sin();
        5.0 * dh * dh + 5.0 * dv * dv + half_roll * half_roll + x[6]
    }

    fn terminal_cost_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        dvector![
            10.0 * (x[0] - 6.0),
            10.0 * (x[1] - 1.0),
            0.5 * x[2].sin(),
            0.0,
            0.0,
            0.0,
            1.0
        ]
    }

    fn num_constraints(&self) -> usize {
        1
    }

    fn constraint(&self, _j: usize, x: &DVector<f64>) -> f64 {
        -x[1]
    }

    fn constraint_grad(&self, _j: usize, _x: &DVector<f64>) -> DVector<f64> {
        dvector![0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    }

    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1e-3)]
    }

    fn x0(&self) -> DVector<f64> {
        dvector![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    }

    fn tf(&self) -> f64 {
        7.5
    }
}
