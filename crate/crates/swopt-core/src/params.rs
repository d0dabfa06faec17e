use crate::CoreError;

/// Tunables for the descent loop, both line searches, the projection
/// cadence, and the subproblem solver.
#[derive(Debug, Clone)]
pub struct AlgoParams {
    /// Sufficient-decrease factor of the step-size search, in (0, 1).
    pub alpha: f64,
    /// Step-size backtracking ratio, in (0, 1).
    pub beta: f64,
    /// Decrease-budget factor of the frequency search, positive.
    pub alpha_bar: f64,
    /// Frequency-search decay base, in (1/√2, 1) so the projection error
    /// shrinks faster than the allotted budget.
    pub beta_bar: f64,
    /// Constraint-violation weight inside the optimality function, positive.
    pub gamma: f64,
    /// Fraction of the decrease budget the projection may consume, in (0, 1).
    pub omega: f64,
    /// Mesh-refinement trigger scale, positive.
    pub lambda: f64,
    /// Mesh-refinement trigger exponent, in (0, 1/2).
    pub chi: f64,
    /// Extra frequency levels probed above the current mesh level.
    pub eta: u32,
    /// Initial mesh level.
    pub n0: u32,
    /// Terminate once θ at the current mesh is at or above this negative
    /// threshold.
    pub theta_stop: f64,
    /// Hard cap on step-size backtracking exponents.
    pub mu_cap: u32,
    /// Relative residual target for the optimality subproblem solver.
    pub subproblem_tol: f64,
}

impl AlgoParams {
    pub fn validate(&self) -> Result<(), CoreError> {
        fn check(ok: bool, what: &str) -> Result<(), CoreError> {
            if ok {
                Ok(())
            } else {
                Err(CoreError::InvalidParams(what.to_string()))
            }
        }
        check(
            self.alpha > 0.0 && self.alpha < 1.0,
            "alpha must lie in (0, 1)",
        )?;
        check(self.beta > 0.0 && self.beta < 1.0, "beta must lie in (0, 1)")?;
        check(self.alpha_bar > 0.0, "alpha_bar must be positive")?;
        check(
            self.beta_bar > std::f64::consts::FRAC_1_SQRT_2 && self.beta_bar < 1.0,
            "beta_bar must lie in (1/sqrt(2), 1)",
        )?;
        check(self.gamma > 0.0, "gamma must be positive")?;
        check(
            self.omega > 0.0 && self.omega < 1.0,
            "omega must lie in (0, 1)",
        )?;
        check(self.lambda > 0.0, "lambda must be positive")?;
        check(self.chi > 0.0 && self.chi < 0.5, "chi must lie in (0, 1/2)")?;
        check(self.theta_stop < 0.0, "theta_stop must be negative")?;
        check(self.subproblem_tol > 0.0, "subproblem_tol must be positive")?;
        Ok(())
    }
}
