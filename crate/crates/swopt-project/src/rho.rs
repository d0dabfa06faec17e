use nalgebra::DVector;
use swopt_core::{Partition, PiecewiseControl};

use crate::haar::{haar_partial_sum, DyadicSignal, StepSignal};
use crate::pwm::{pwm, DyadicWeights};
use crate::ProjectError;

const SIMPLEX_BAND: f64 = 1e-9;

fn component_signal(xi: &PiecewiseControl, pick: impl Fn(usize) -> f64) -> StepSignal {
    let times = xi.partition().samples().to_vec();
    let values = (0..xi.partition().num_intervals()).map(pick).collect();
    StepSignal::new(times, values).expect("control partition is a valid signal grid")
}

/// Haar partial sum of each mode weight of a relaxed control, bundled as
/// per-cell simplex rows at level N+1. The partial sum preserves cell
/// means, so rows sum to 1 up to roundoff; anything outside the simplex
/// band is reported as a violation rather than renormalized.
pub fn project_relaxed(xi: &PiecewiseControl, n: u32) -> Result<DyadicWeights, ProjectError> {
    let q = xi.mode_count();
    let per_mode: Vec<DyadicSignal> = (0..q)
        .map(|i| haar_partial_sum(&component_signal(xi, |k| xi.d_values()[k][i]), n))
        .collect();
    let cells = 1usize << (n + 1);
    let mut rows = Vec::with_capacity(cells);
    for c in 0..cells {
        let row = DVector::from_fn(q, |i, _| per_mode[i].values()[c]);
        for &v in row.iter() {
            if !(-SIMPLEX_BAND..=1.0 + SIMPLEX_BAND).contains(&v) {
                return Err(ProjectError::SimplexViolation { index: c, value: v });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_BAND {
            return Err(ProjectError::SimplexViolation { index: c, value: sum });
        }
        rows.push(row);
    }
    DyadicWeights::new(n + 1, rows)
}

/// The switching grid σ_N produced by projecting a relaxed control:
/// the PWM partition of its Haar-filtered mode weights.
pub fn sigma_partition(xi: &PiecewiseControl, n: u32) -> Result<Partition, ProjectError> {
    let weights = project_relaxed(xi, n)?;
    let (_, partition) = pwm(&weights, n)?;
    Ok(partition)
}

/// Full projection ρ_N: Haar partial sums of the continuous inputs
/// (clipped into the input box against roundoff) and PWM of the Haar
/// partial sums of the mode weights. The continuous inputs live on the
/// level-(N+1) dyadic grid, which refines every σ_N interval of positive
/// length, so sampling them at interval left endpoints loses nothing
/// under left-endpoint integration.
pub fn rho(
    xi: &PiecewiseControl,
    n: u32,
    input_box: &[(f64, f64)],
) -> Result<(PiecewiseControl, Partition), ProjectError> {
    let m = xi.input_dim();
    if input_box.len() != m {
        return Err(ProjectError::BoxMismatch {
            expected: m,
            got: input_box.len(),
        });
    }
    let weights = project_relaxed(xi, n)?;
    let (d_rows, partition) = pwm(&weights, n)?;

    let mut u_signals = Vec::with_capacity(m);
    for (j, &(lo, hi)) in input_box.iter().enumerate() {
        let proj = haar_partial_sum(&component_signal(xi, |k| xi.u_values()[k][j]), n);
        let clipped: Vec<f64> = proj
            .values()
            .iter()
            .map(|&v| {
                debug_assert!(
                    v >= lo - 1e-12 && v <= hi + 1e-12,
                    "Haar partial sum escaped the input box by more than roundoff"
                );
                v.clamp(lo, hi)
            })
            .collect();
        u_signals.push(DyadicSignal::new(n + 1, clipped)?);
    }

    let u_vals: Vec<DVector<f64>> = partition.samples()[..partition.num_intervals()]
        .iter()
        .map(|&left| DVector::from_fn(m, |j, _| u_signals[j].value_at(left)))
        .collect();
    let pure = PiecewiseControl::pure(partition.clone(), u_vals, d_rows)?;
    Ok((pure, partition))
}
