use nalgebra::{dmatrix, dvector, DMatrix, DVector};
use swopt_core::{AlgoParams, Partition, PiecewiseControl};
use swopt_sim::SystemModel;

use crate::BenchmarkSpec;

const RUNNING_WEIGHT: f64 = 0.01;

/// Three-mode linear system: the modes share an unstable state matrix
/// and differ only in which direction the scalar input actuates. State
/// layout is the three physical states followed by the running-cost
/// accumulator for 0.01 u².
pub struct LqrModel {
    a: DMatrix<f64>,
    b: [DVector<f64>; 3],
}

pub fn make_lqr() -> (LqrModel, BenchmarkSpec) {
    let model = LqrModel {
        a: dmatrix![
            1.0979, -0.0105, 0.0167;
            -0.0105, 1.0481, 0.0825;
            0.0167, 0.0825, 1.1540
        ],
        b: [
            dvector![0.9801, -0.1987, 0.0],
            dvector![0.1743, 0.8601, -0.4794],
            dvector![0.0952, 0.4699, 0.8776],
        ],
    };
    let partition = Partition::uniform(16).expect("nonzero interval count");
    let u = vec![DVector::zeros(1); 16];
    let d = vec![dvector![1.0, 0.0, 0.0]; 16];
    let init = PiecewiseControl::pure(partition, u, d).expect("valid initial control");
    let spec = BenchmarkSpec {
        name: "lqr",
        params: AlgoParams {
            alpha: 0.1,
            beta: 0.87,
            alpha_bar: 0.005,
            beta_bar: 0.72,
            gamma: 1.0,
            omega: 1e-6,
            lambda: 1e-4,
            chi: 0.25,
            eta: 2,
            n0: 3,
            theta_stop: -1e-2,
            mu_cap: 60,
            subproblem_tol: 1e-8,
        },
        init,
        expected_cost: 1.23e-3,
    };
    (model, spec)
}

impl SystemModel for LqrModel {
    fn state_dim(&self) -> usize {
        4
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
        let dx = &self.a * x.rows(0, 3) + &self.b[mode] * u[0];
        dvector![dx[0], dx[1], dx[2], RUNNING_WEIGHT * u[0] * u[0]]
    }

    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _mode: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(4, 4);
        j.view_mut((0, 0), (3, 3)).copy_from(&self.a);
        j
    }

    fn jac_u(&self, _t: f64, _x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(4, 1);
        j.view_mut((0, 0), (3, 1)).copy_from(&self.b[mode]);
        j[(3, 0)] = 2.0 * RUNNING_WEIGHT * u[0];
        j
    }

    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        let dx = [x[0] - 1.0, x[1] - 1.0, x[2] - 1.0];
        dx.iter().map(|v| v * v).sum::<f64>() + x[3]
    }

    fn terminal_cost_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        dvector![
            2.0 * (x[0] - 1.0),
            2.0 * (x[1] - 1.0),
            2.0 * (x[2] - 1.0),
            1.0
        ]
    }

    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![(-20.0, 20.0)]
    }

    fn x0(&self) -> DVector<f64> {
        DVector::zeros(4)
    }

    fn tf(&self) -> f64 {
        2.0
    }
}
