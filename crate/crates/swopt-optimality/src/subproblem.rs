use swopt_core::{x_norm, ControlDirection, CoreError, PiecewiseControl};
use swopt_sim::{FunctionalGradients, GradientRow, PsiEval, SystemModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalTag {
    Cost,
    Constraint { j: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Feasible,
    Infeasible,
}

/// One affine piece of the inner max of ζ_τ: a directional derivative row
/// plus the branch-dependent constant.
#[derive(Debug, Clone)]
pub struct AffineFunctional {
    pub row: GradientRow,
    pub offset: f64,
    pub tag: FunctionalTag,
}

/// The data of θ_τ(ξ) = min over ξ' ∈ X_{τ,r} of
/// max_i(row_i·(ξ'−ξ) + offset_i) + ‖ξ'−ξ‖_X.
#[derive(Debug, Clone)]
pub struct Subproblem {
    base: PiecewiseControl,
    functionals: Vec<AffineFunctional>,
    branch: Branch,
    gamma: f64,
    input_box: Vec<(f64, f64)>,
    simplex_dim: usize,
}

impl Subproblem {
    pub fn new(
        base: PiecewiseControl,
        functionals: Vec<AffineFunctional>,
        branch: Branch,
        gamma: f64,
        input_box: Vec<(f64, f64)>,
        simplex_dim: usize,
    ) -> Self {
        assert!(
            !functionals.is_empty(),
            "the cost functional is always present"
        );
        Subproblem {
            base,
            functionals,
            branch,
            gamma,
            input_box,
            simplex_dim,
        }
    }

    pub fn base(&self) -> &PiecewiseControl {
        &self.base
    }

    pub fn functionals(&self) -> &[AffineFunctional] {
        &self.functionals
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn input_box(&self) -> &[(f64, f64)] {
        &self.input_box
    }

    pub fn simplex_dim(&self) -> usize {
        self.simplex_dim
    }

    /// ζ_τ(ξ, ξ+dir) for a direction on the base partition.
    pub fn zeta_direction(&self, dir: &ControlDirection) -> f64 {
        let max_term = self
            .functionals
            .iter()
            .map(|f| f.row.apply(dir) + f.offset)
            .fold(f64::NEG_INFINITY, f64::max);
        max_term + x_norm(dir)
    }

    /// ζ_τ(ξ, ξ') for a candidate control on the same partition.
    pub fn zeta(&self, candidate: &PiecewiseControl) -> Result<f64, CoreError> {
        Ok(self.zeta_direction(&self.base.direction_to(candidate)?))
    }
}

/// Assemble the ζ_τ subproblem at ξ from precomputed gradients. Ψ_τ ≤ 0
/// (or no constraints at all) selects the Feasible branch: the cost row
/// keeps offset 0 and every constraint row is shifted by γΨ_τ. Ψ_τ > 0
/// selects the Infeasible branch: the cost row is shifted by −Ψ_τ and the
/// constraint rows keep offset 0.
pub fn build_subproblem(
    model: &dyn SystemModel,
    xi: &PiecewiseControl,
    grads: &FunctionalGradients,
    gamma: f64,
) -> Subproblem {
    let (branch, cost_offset, constraint_offset) = match &grads.psi {
        PsiEval::Unconstrained => (Branch::Feasible, 0.0, 0.0),
        PsiEval::Max { value, .. } if *value > 0.0 => (Branch::Infeasible, -value, 0.0),
        PsiEval::Max { value, .. } => (Branch::Feasible, 0.0, gamma * value),
    };
    let mut functionals = Vec::with_capacity(
        1 + grads
            .constraints
            .iter()
            .map(|rows| rows.len())
            .sum::<usize>(),
    );
    functionals.push(AffineFunctional {
        row: grads.cost.clone(),
        offset: cost_offset,
        tag: FunctionalTag::Cost,
    });
    for (j, rows) in grads.constraints.iter().enumerate() {
        for (k, row) in rows.iter().enumerate() {
            functionals.push(AffineFunctional {
                row: row.clone(),
                offset: constraint_offset,
                tag: FunctionalTag::Constraint { j, k },
            });
        }
    }
    Subproblem::new(
        xi.clone(),
        functionals,
        branch,
        gamma,
        model.input_box(),
        model.mode_count(),
    )
}
