use nalgebra::DVector;
use swopt_core::{ControlDirection, PiecewiseControl};

use crate::model::SystemModel;
use crate::stm::{interval_caches, TransitionStack};
use crate::trajectory::{constraint_eval, DiscreteTrajectory, PsiEval};

/// Linear-functional coefficients over control perturbations: the value on
/// a direction ξ' is Σ_l ⟨u_coeffs[l], u'(τ_l)⟩ + ⟨d_coeffs[l], d'(τ_l)⟩.
/// Rows for a node τ_k only store intervals l < k; missing tails are zero.
#[derive(Debug, Clone)]
pub struct GradientRow {
    pub u_coeffs: Vec<DVector<f64>>,
    pub d_coeffs: Vec<DVector<f64>>,
}

impl GradientRow {
    pub fn apply(&self, dir: &ControlDirection) -> f64 {
        let mut acc = 0.0;
        for (l, (cu, cd)) in self.u_coeffs.iter().zip(self.d_coeffs.iter()).enumerate() {
            acc += cu.dot(&dir.u_values()[l]) + cd.dot(&dir.d_values()[l]);
        }
        acc
    }
}

/// Directional derivatives of every terminal functional at a fixed ξ:
/// DJ_τ(ξ; ·) and Dψ_{τ,j,τ_k}(ξ; ·) for every constraint j and node k,
/// together with the node-wise constraint values.
#[derive(Debug, Clone)]
pub struct FunctionalGradients {
    pub cost: GradientRow,
    /// constraints[j][k] is the row for Dψ_{τ,j,τ_k}.
    pub constraints: Vec<Vec<GradientRow>>,
    pub psi: PsiEval,
}

impl FunctionalGradients {
    pub fn dj(&self, dir: &ControlDirection) -> f64 {
        self.cost.apply(dir)
    }

    pub fn dpsi(&self, j: usize, k: usize, dir: &ControlDirection) -> f64 {
        self.constraints[j][k].apply(dir)
    }
}

/// One backward adjoint sweep per terminal functional:
/// with a_k = ∇h(z(τ_k)) and a_l = factor_lᵀ a_{l+1}, the coefficient pair
/// on interval l is (B_lᵀ a_{l+1}, [F_{i,l}ᵀ a_{l+1}]_i) where B_l and
/// F_{i,l} are the Δτ_l(tf−t0)-scaled input Jacobian and mode fields.
fn sweep(
    grad_at_node: DVector<f64>,
    node: usize,
    stack: &TransitionStack,
    b_mats: &[nalgebra::DMatrix<f64>],
    mode_fields: &[Vec<DVector<f64>>],
) -> GradientRow {
    let q = if mode_fields.is_empty() {
        0
    } else {
        mode_fields[0].len()
    };
    let mut u_coeffs = vec![DVector::zeros(0); node];
    let mut d_coeffs = vec![DVector::zeros(q); node];
    let mut a = grad_at_node;
    for l in (0..node).rev() {
        u_coeffs[l] = b_mats[l].tr_mul(&a);
        let mut cd = DVector::zeros(q);
        for i in 0..q {
            cd[i] = mode_fields[l][i].dot(&a);
        }
        d_coeffs[l] = cd;
        a = stack.factors()[l].tr_mul(&a);
    }
    GradientRow { u_coeffs, d_coeffs }
}

pub fn functional_gradients(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    traj: &DiscreteTrajectory,
    stack: &TransitionStack,
) -> FunctionalGradients {
    let (b_mats, mode_fields) = interval_caches(model, xi, traj);
    let intervals = traj.partition().num_intervals();

    let cost = sweep(
        model.terminal_cost_grad(traj.final_state()),
        intervals,
        stack,
        &b_mats,
        &mode_fields,
    );

    let mut constraints = Vec::with_capacity(model.num_constraints());
    for j in 0..model.num_constraints() {
        let rows: Vec<GradientRow> = (0..=intervals)
            .map(|k| {
                sweep(
                    model.constraint_grad(j, &traj.nodes()[k]),
                    k,
                    stack,
                    &b_mats,
                    &mode_fields,
                )
            })
            .collect();
        constraints.push(rows);
    }

    FunctionalGradients {
        cost,
        constraints,
        psi: constraint_eval(model, traj),
    }
}
