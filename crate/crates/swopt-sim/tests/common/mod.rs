#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use swopt_core::{Partition, PiecewiseControl};
use swopt_sim::{ProbeRegion, SystemModel};

/// One mode, zero dynamics.
pub struct ConstModel {
    pub x0: DVector<f64>,
}

impl SystemModel for ConstModel {
    fn state_dim(&self) -> usize {
        self.x0.len()
    }
    fn input_dim(&self) -> usize {
        0
    }
    fn mode_count(&self) -> usize {
        1
    }
    fn vector_field(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DVector<f64> {
        DVector::zeros(self.x0.len())
    }
    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(self.x0.len(), self.x0.len())
    }
    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(self.x0.len(), 0)
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x.norm_squared()
    }
    fn terminal_cost_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        x * 2.0
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![]
    }
    fn x0(&self) -> DVector<f64> {
        self.x0.clone()
    }
}

/// Scalar ẋ = a·x with one mode and no input.
pub struct ExpModel {
    pub a: f64,
}

impl SystemModel for ExpModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn input_dim(&self) -> usize {
        0
    }
    fn mode_count(&self) -> usize {
        1
    }
    fn vector_field(&self, _t: f64, x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DVector<f64> {
        x * self.a
    }
    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, self.a)
    }
    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 0)
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[0]
    }
    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![]
    }
    fn x0(&self) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
}

/// Two constant scalar modes ẋ = c1 and ẋ = c2, no input, plus a single
/// constraint h(x) = x.
pub struct TwoRateModel {
    pub c1: f64,
    pub c2: f64,
}

impl SystemModel for TwoRateModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn input_dim(&self) -> usize {
        0
    }
    fn mode_count(&self) -> usize {
        2
    }
    fn vector_field(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, m: usize) -> DVector<f64> {
        DVector::from_vec(vec![if m == 0 { self.c1 } else { self.c2 }])
    }
    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }
    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 0)
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[0]
    }
    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn constraint(&self, _j: usize, x: &DVector<f64>) -> f64 {
        x[0]
    }
    fn constraint_grad(&self, _j: usize, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![]
    }
    fn x0(&self) -> DVector<f64> {
        DVector::zeros(1)
    }
}

/// Scalar ẋ = x², which Euler drives past the blow-up guard quickly.
pub struct BlowupModel;

impl SystemModel for BlowupModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn input_dim(&self) -> usize {
        0
    }
    fn mode_count(&self) -> usize {
        1
    }
    fn vector_field(&self, _t: f64, x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DVector<f64> {
        DVector::from_vec(vec![x[0] * x[0]])
    }
    fn jac_x(&self, _t: f64, x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, 2.0 * x[0])
    }
    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 0)
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[0]
    }
    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![]
    }
    fn x0(&self) -> DVector<f64> {
        DVector::from_vec(vec![10.0])
    }
}

/// Scalar ẋ = t in physical time on the horizon [1, 3], for checking the
/// change of variables onto [0, 1].
pub struct TimeModel;

impl SystemModel for TimeModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn input_dim(&self) -> usize {
        0
    }
    fn mode_count(&self) -> usize {
        1
    }
    fn vector_field(&self, t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DVector<f64> {
        DVector::from_vec(vec![t])
    }
    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }
    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 0)
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[0]
    }
    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![]
    }
    fn x0(&self) -> DVector<f64> {
        DVector::from_vec(vec![0.25])
    }
    fn t0(&self) -> f64 {
        1.0
    }
    fn tf(&self) -> f64 {
        3.0
    }
}

/// Scalar ẋ = u with one mode, used for hand-checkable gradient rows.
pub struct IntegratorModel;

impl SystemModel for IntegratorModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn input_dim(&self) -> usize {
        1
    }
    fn mode_count(&self) -> usize {
        1
    }
    fn vector_field(&self, _t: f64, _x: &DVector<f64>, u: &DVector<f64>, _m: usize) -> DVector<f64> {
        DVector::from_vec(vec![u[0]])
    }
    fn jac_x(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }
    fn jac_u(&self, _t: f64, _x: &DVector<f64>, _u: &DVector<f64>, _m: usize) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, 1.0)
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[0]
    }
    fn terminal_cost_grad(&self, _x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![1.0])
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![(-5.0, 5.0)]
    }
    fn x0(&self) -> DVector<f64> {
        DVector::zeros(1)
    }
}

/// Two-state, two-mode nonlinear model with an input, two constraints,
/// and time dependence; the workhorse for derivative and rate tests.
///
/// mode 1: ẋ = (x₂ + 0.3 sin t, u − 0.5 x₁)
/// mode 2: ẋ = (−0.4 x₁ + u x₂, 0.2 x₁²)
/// h₀ = x₁² + 0.5 x₂², h₁ = x₂ − 0.1, h₂ = −x₁ − 2
pub struct RichModel;

impl SystemModel for RichModel {
    fn state_dim(&self) -> usize {
        2
    }
    fn input_dim(&self) -> usize {
        1
    }
    fn mode_count(&self) -> usize {
        2
    }
    fn vector_field(&self, t: f64, x: &DVector<f64>, u: &DVector<f64>, m: usize) -> DVector<f64> {
        if m == 0 {
            DVector::from_vec(vec![x[1] + 0.3 * t.sin(), u[0] - 0.5 * x[0]])
        } else {
            DVector::from_vec(vec![-0.4 * x[0] + u[0] * x[1], 0.2 * x[0] * x[0]])
        }
    }
    fn jac_x(&self, _t: f64, x: &DVector<f64>, u: &DVector<f64>, m: usize) -> DMatrix<f64> {
        if m == 0 {
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -0.5, 0.0])
        } else {
            DMatrix::from_row_slice(2, 2, &[-0.4, u[0], 0.4 * x[0], 0.0])
        }
    }
    fn jac_u(&self, _t: f64, x: &DVector<f64>, _u: &DVector<f64>, m: usize) -> DMatrix<f64> {
        if m == 0 {
            DMatrix::from_row_slice(2, 1, &[0.0, 1.0])
        } else {
            DMatrix::from_row_slice(2, 1, &[x[1], 0.0])
        }
    }
    fn terminal_cost(&self, x: &DVector<f64>) -> f64 {
        x[0] * x[0] + 0.5 * x[1] * x[1]
    }
    fn terminal_cost_grad(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![2.0 * x[0], x[1]])
    }
    fn num_constraints(&self) -> usize {
        2
    }
    fn constraint(&self, j: usize, x: &DVector<f64>) -> f64 {
        if j == 0 {
            x[1] - 0.1
        } else {
            -x[0] - 2.0
        }
    }
    fn constraint_grad(&self, j: usize, _x: &DVector<f64>) -> DVector<f64> {
        if j == 0 {
            DVector::from_vec(vec![0.0, 1.0])
        } else {
            DVector::from_vec(vec![-1.0, 0.0])
        }
    }
    fn input_box(&self) -> Vec<(f64, f64)> {
        vec![(-2.0, 2.0)]
    }
    fn x0(&self) -> DVector<f64> {
        DVector::from_vec(vec![0.5, -0.2])
    }
}

pub fn rich_probe_region() -> ProbeRegion {
    ProbeRegion {
        x_lo: DVector::from_vec(vec![-1.5, -1.5]),
        x_hi: DVector::from_vec(vec![1.5, 1.5]),
        u_lo: DVector::from_vec(vec![-2.0]),
        u_hi: DVector::from_vec(vec![2.0]),
        t_lo: 0.0,
        t_hi: 1.0,
    }
}

/// Constant control with the given u and d values on every interval.
pub fn constant_control(p: &Partition, u: &[f64], d: &[f64]) -> PiecewiseControl {
    let k = p.num_intervals();
    PiecewiseControl::relaxed(
        p.clone(),
        vec![DVector::from_vec(u.to_vec()); k],
        vec![DVector::from_vec(d.to_vec()); k],
    )
    .unwrap()
}
