use nalgebra::{DMatrix, DVector};

/// A switched system: q mode vector fields with shared continuous input,
/// a terminal cost, and optional terminal-form constraint functions
/// evaluated along the trajectory.
///
/// Fields and Jacobians are stated in original time units on the model's
/// own horizon [t0, tf]; the integration layer handles the change of
/// variables onto [0, 1].
pub trait SystemModel: Send + Sync {
    fn state_dim(&self) -> usize;
    fn input_dim(&self) -> usize;
    fn mode_count(&self) -> usize;

    /// f(t, x, u, e_mode) in original time units.
    fn vector_field(&self, t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize)
        -> DVector<f64>;

    /// ∂f/∂x of the given mode.
    fn jac_x(&self, t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64>;

    /// ∂f/∂u of the given mode.
    fn jac_u(&self, t: f64, x: &DVector<f64>, u: &DVector<f64>, mode: usize) -> DMatrix<f64>;

    fn terminal_cost(&self, x: &DVector<f64>) -> f64;

    fn terminal_cost_grad(&self, x: &DVector<f64>) -> DVector<f64>;

    fn num_constraints(&self) -> usize {
        0
    }

    fn constraint(&self, j: usize, x: &DVector<f64>) -> f64 {
        let _ = x;
        panic!("constraint {j} queried on a model without constraints");
    }

    fn constraint_grad(&self, j: usize, x: &DVector<f64>) -> DVector<f64> {
        let _ = x;
        panic!("constraint gradient {j} queried on a model without constraints");
    }

    /// Componentwise [lo, hi] bounds defining the admissible input box U.
    fn input_box(&self) -> Vec<(f64, f64)>;

    fn x0(&self) -> DVector<f64>;

    fn t0(&self) -> f64 {
        0.0
    }

    fn tf(&self) -> f64 {
        1.0
    }
}

pub type DynModel = Box<dyn SystemModel>;

/// Physical time for a normalized time τ ∈ [0, 1].
pub(crate) fn phys_time(model: &dyn SystemModel, tau: f64) -> f64 {
    model.t0() + tau * (model.tf() - model.t0())
}

pub(crate) fn time_scale(model: &dyn SystemModel) -> f64 {
    model.tf() - model.t0()
}

/// Relaxed field Σ_i d_i f(t, x, u, e_i), skipping modes with weight
/// exactly zero so pure controls touch only the active mode.
pub(crate) fn mixed_field(
    model: &dyn SystemModel,
    t: f64,
    x: &DVector<f64>,
    u: &DVector<f64>,
    d: &DVector<f64>,
) -> DVector<f64> {
    let mut out = DVector::zeros(model.state_dim());
    for (i, &w) in d.iter().enumerate() {
        if w != 0.0 {
            out.axpy(w, &model.vector_field(t, x, u, i), 1.0);
        }
    }
    out
}

pub(crate) fn mixed_jac_x(
    model: &dyn SystemModel,
    t: f64,
    x: &DVector<f64>,
    u: &DVector<f64>,
    d: &DVector<f64>,
) -> DMatrix<f64> {
    let n = model.state_dim();
    let mut out = DMatrix::zeros(n, n);
    for (i, &w) in d.iter().enumerate() {
        if w != 0.0 {
            out += model.jac_x(t, x, u, i) * w;
        }
    }
    out
}

pub(crate) fn mixed_jac_u(
    model: &dyn SystemModel,
    t: f64,
    x: &DVector<f64>,
    u: &DVector<f64>,
    d: &DVector<f64>,
) -> DMatrix<f64> {
    let n = model.state_dim();
    let m = model.input_dim();
    let mut out = DMatrix::zeros(n, m);
    for (i, &w) in d.iter().enumerate() {
        if w != 0.0 {
            out += model.jac_u(t, x, u, i) * w;
        }
    }
    out
}
