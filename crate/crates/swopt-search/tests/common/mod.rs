use nalgebra::{DMatrix, DVector};
use swopt_core::{AlgoParams, Partition, PiecewiseControl};
use swopt_optimality::OptimalityReport;
use swopt_sim::SystemModel;

/// Scalar integrator ẋ = u with a single mode, terminal cost sign·x(1),
/// an optional terminal-form bound x − threshold ≤ 0, and an optional
/// spike region |u| > spike_at where the field explodes. Euler on this
/// model is exact, so every search inequality can be checked by hand.
pub struct Integrator {
    pub sign: f64,
    pub threshold: Option<f64>,
    pub spike_at: Option<f64>,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            sign: 1.0,
            threshold: None,
            spike_at: None,
        }
    }
}

impl SystemModel for Integrator {
    fn state_dim(&self) -> usize {
        1
    }

    fn input_dim(&self) -> usize {
        1
    }

    fn mode_count(&self) -> usize {
        1
    }

    fn vector_field(
        &self,
        _t: f64,
        _x: &DVector<f64>,
        u: &DVector<f64>,
        _mode: usize,
    ) -> DVector<f64> {
        if let Some(s) = self.spike_at {
            if u[0].abs() > s {
                return DVector::from_element(1, 1.0e30);
            }
        }
        DVector::from_element(1, u[0])
    }

    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _mode: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }

    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _mode: usize) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, 1.0)
    }

    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        self.sign * x[0]
    }

    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_element(1, self.sign)
    }

    fn num_constraints(&self) -> usize {
        usize::from(self.threshold.is_some())
    }

    fn constraint(&self, _j: usize, x: &DVector<f64>) -> f64 {
        x[0] - self.threshold.unwrap()
    }

    fn constraint_grad(&self, _j: usize, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_element(1, 1.0)
    }

    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![(-10.0, 10.0)]
    }

    fn x0(&self) -> DVector<f64> {
        DVector::zeros(1)
    }
}

/// Constant single-input, single-mode control on a uniform partition.
pub fn constant_control(u: f64, intervals: usize) -> PiecewiseControl {
    let partition = Partition::uniform(intervals).unwrap();
    let u_values = vec![DVector::from_element(1, u); intervals];
    let d_values = vec![DVector::from_element(1, 1.0); intervals];
    PiecewiseControl::relaxed(partition, u_values, d_values).unwrap()
}

/// An optimality report pointing at `direction` with a prescribed θ, the
/// way the searches consume one.
pub fn report_towards(direction: PiecewiseControl, theta: f64) -> OptimalityReport {
    OptimalityReport {
        theta,
        direction,
        step_norm: 0.0,
        active: Vec::new(),
        solver_iters: 0,
        residual: 0.0,
    }
}

pub fn base_params() -> AlgoParams {
    AlgoParams {
        alpha: 0.1,
        beta: 0.5,
        alpha_bar: 0.3,
        beta_bar: 0.75,
        gamma: 1.0,
        omega: 0.05,
        lambda: 1e-4,
        chi: 0.25,
        eta: 2,
        n0: 0,
        theta_stop: -1e-3,
        mu_cap: 60,
        subproblem_tol: 1e-8,
    }
}
