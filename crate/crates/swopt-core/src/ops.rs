use nalgebra::DVector;

use crate::{ControlDirection, CoreError, Partition, PiecewiseControl, Purity};

/// The optimization-space norm ‖ξ'‖ = ‖u'‖_{L²} + ‖d'‖_{L²}, evaluated in
/// closed form for step functions:
/// sqrt(Σ_k Δτ_k |u'_k|²) + sqrt(Σ_k Δτ_k |d'_k|²).
pub fn x_norm(a: &ControlDirection) -> f64 {
    let p = a.partition();
    let mut su = 0.0;
    let mut sd = 0.0;
    for k in 0..p.num_intervals() {
        let w = p.delta(k);
        su += w * a.u_values()[k].norm_squared();
        sd += w * a.d_values()[k].norm_squared();
    }
    su.sqrt() + sd.sqrt()
}

fn one_norm_diff(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum()
}

/// Total variation of the control as a function on [0, 1]: the sum of
/// 1-norms of jumps between consecutive intervals of positive length.
/// Values carried on zero-length intervals are invisible to the function
/// and contribute nothing.
///
/// The source norm is defined componentwise and leaves the combination
/// rule for the pair (u, d) open; this returns the u seminorm plus the d
/// seminorm.
pub fn bv_seminorm(c: &PiecewiseControl) -> f64 {
    let p = c.partition();
    let mut total = 0.0;
    let mut prev: Option<usize> = None;
    for k in 0..p.num_intervals() {
        if p.delta(k) <= 0.0 {
            continue;
        }
        if let Some(j) = prev {
            total += one_norm_diff(&c.u_values()[k], &c.u_values()[j]);
            total += one_norm_diff(&c.d_values()[k], &c.d_values()[j]);
        }
        prev = Some(k);
    }
    total
}

/// Resamples `c` onto the finer partition `p`, copying each value to the
/// intervals it covers, so the result is the same function on [0, 1].
/// Fails with `NonRefinement` when `p` misses one of `c`'s breakpoints
/// (exact equality with the [`crate::TIME_EQ_TOL`] guard).
pub fn refine_onto(c: &PiecewiseControl, p: &Partition) -> Result<PiecewiseControl, CoreError> {
    if let Some(value) = c.partition().missing_breakpoint_in(p) {
        return Err(CoreError::NonRefinement { value });
    }
    let src = c.partition();
    let mut u_values = Vec::with_capacity(p.num_intervals());
    let mut d_values = Vec::with_capacity(p.num_intervals());
    for k in 0..p.num_intervals() {
        let a = p.samples()[k];
        let b = p.samples()[k + 1];
        let probe = if b > a { 0.5 * (a + b) } else { a };
        let j = src.interval_containing(probe);
        u_values.push(c.u_values()[j].clone());
        d_values.push(c.d_values()[j].clone());
    }
    match c.purity() {
        Purity::Pure => PiecewiseControl::pure(p.clone(), u_values, d_values),
        Purity::Relaxed => PiecewiseControl::relaxed(p.clone(), u_values, d_values),
    }
}
