use nalgebra::DVector;

use crate::partition::TIME_EQ_TOL;
use crate::{CoreError, Partition};

/// Band around the probability simplex accepted by the relaxed
/// constructor. Inputs outside it are rejected, never renormalized, so
/// numerical drift is caught where it enters.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purity {
    Relaxed,
    Pure,
}

/// A piecewise-constant control ξ = (u, d): one continuous input vector
/// and one discrete-weight vector per interval of the partition.
///
/// Relaxed controls carry weights in the probability simplex (within
/// [`SIMPLEX_TOL`]); pure controls carry exact simplex corners, i.e. a
/// genuine switching signal.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseControl {
    partition: Partition,
    u_values: Vec<DVector<f64>>,
    d_values: Vec<DVector<f64>>,
    purity: Purity,
}

/// An unconstrained tangent ξ' − ξ: the same shape as a control, with
/// free real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlDirection {
    partition: Partition,
    u_values: Vec<DVector<f64>>,
    d_values: Vec<DVector<f64>>,
}

fn validate_shape(
    partition: &Partition,
    u_values: &[DVector<f64>],
    d_values: &[DVector<f64>],
) -> Result<(), CoreError> {
    let intervals = partition.num_intervals();
    if u_values.len() != intervals {
        return Err(CoreError::LengthMismatch {
            expected: intervals,
            got: u_values.len(),
        });
    }
    if d_values.len() != intervals {
        return Err(CoreError::LengthMismatch {
            expected: intervals,
            got: d_values.len(),
        });
    }
    let m = u_values[0].len();
    let q = d_values[0].len();
    for (index, (u, d)) in u_values.iter().zip(d_values.iter()).enumerate() {
        if u.len() != m {
            return Err(CoreError::DimensionMismatch {
                index,
                expected: m,
                got: u.len(),
            });
        }
        if d.len() != q {
            return Err(CoreError::DimensionMismatch {
                index,
                expected: q,
                got: d.len(),
            });
        }
        if u.iter().any(|v| !v.is_finite()) || d.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFiniteValue { index });
        }
    }
    Ok(())
}

pub(crate) fn same_partition(a: &Partition, b: &Partition) -> bool {
    a.num_samples() == b.num_samples()
        && a.samples()
            .iter()
            .zip(b.samples().iter())
            .all(|(x, y)| (x - y).abs() <= TIME_EQ_TOL)
}

impl PiecewiseControl {
    /// Builds a relaxed control. Every weight must lie in [0, 1] and every
    /// row must sum to 1, each within [`SIMPLEX_TOL`]; violations are
    /// rejected rather than renormalized.
    pub fn relaxed(
        partition: Partition,
        u_values: Vec<DVector<f64>>,
        d_values: Vec<DVector<f64>>,
    ) -> Result<Self, CoreError> {
        validate_shape(&partition, &u_values, &d_values)?;
        for (index, d) in d_values.iter().enumerate() {
            for &value in d.iter() {
                if !(-SIMPLEX_TOL..=1.0 + SIMPLEX_TOL).contains(&value) {
                    return Err(CoreError::WeightOutOfRange { index, value });
                }
            }
            let sum: f64 = d.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(CoreError::WeightSumOff { index, sum });
            }
        }
        Ok(PiecewiseControl {
            partition,
            u_values,
            d_values,
            purity: Purity::Relaxed,
        })
    }

    /// Builds a pure control: every weight row must be exactly a simplex
    /// corner, one component 1.0 and the rest 0.0.
    pub fn pure(
        partition: Partition,
        u_values: Vec<DVector<f64>>,
        d_values: Vec<DVector<f64>>,
    ) -> Result<Self, CoreError> {
        validate_shape(&partition, &u_values, &d_values)?;
        for (index, d) in d_values.iter().enumerate() {
            let ones = d.iter().filter(|&&v| v == 1.0).count();
            let zeros = d.iter().filter(|&&v| v == 0.0).count();
            if ones != 1 || ones + zeros != d.len() {
                return Err(CoreError::NotPure { index });
            }
        }
        Ok(PiecewiseControl {
            partition,
            u_values,
            d_values,
            purity: Purity::Pure,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn u_values(&self) -> &[DVector<f64>] {
        &self.u_values
    }

    pub fn d_values(&self) -> &[DVector<f64>] {
        &self.d_values
    }

    pub fn purity(&self) -> Purity {
        self.purity
    }

    pub fn is_pure(&self) -> bool {
        self.purity == Purity::Pure
    }

    /// Continuous-input dimension m.
    pub fn input_dim(&self) -> usize {
        self.u_values[0].len()
    }

    /// Mode count q.
    pub fn mode_count(&self) -> usize {
        self.d_values[0].len()
    }

    /// Difference `other − self` as a direction. Both controls must share
    /// the same partition.
    pub fn direction_to(&self, other: &PiecewiseControl) -> Result<ControlDirection, CoreError> {
        if !same_partition(&self.partition, &other.partition) {
            return Err(CoreError::PartitionMismatch);
        }
        let u_values = self
            .u_values
            .iter()
            .zip(other.u_values.iter())
            .map(|(a, b)| b - a)
            .collect();
        let d_values = self
            .d_values
            .iter()
            .zip(other.d_values.iter())
            .map(|(a, b)| b - a)
            .collect();
        ControlDirection::new(self.partition.clone(), u_values, d_values)
    }

    /// `self + lambda · dir`, validated as a relaxed control.
    pub fn apply_direction(
        &self,
        dir: &ControlDirection,
        lambda: f64,
    ) -> Result<PiecewiseControl, CoreError> {
        if !same_partition(&self.partition, &dir.partition) {
            return Err(CoreError::PartitionMismatch);
        }
        let u_values = self
            .u_values
            .iter()
            .zip(dir.u_values.iter())
            .map(|(a, v)| a + v * lambda)
            .collect();
        let d_values = self
            .d_values
            .iter()
            .zip(dir.d_values.iter())
            .map(|(a, v)| a + v * lambda)
            .collect();
        PiecewiseControl::relaxed(self.partition.clone(), u_values, d_values)
    }

    /// Convex step `(1 − lambda) · self + lambda · other`, validated as a
    /// relaxed control. Equals `self + lambda (other − self)` but keeps
    /// weight rows inside the simplex band to rounding.
    pub fn step_towards(
        &self,
        other: &PiecewiseControl,
        lambda: f64,
    ) -> Result<PiecewiseControl, CoreError> {
        if !same_partition(&self.partition, &other.partition) {
            return Err(CoreError::PartitionMismatch);
        }
        let w = 1.0 - lambda;
        let u_values = self
            .u_values
            .iter()
            .zip(other.u_values.iter())
            .map(|(a, b)| a * w + b * lambda)
            .collect();
        let d_values = self
            .d_values
            .iter()
            .zip(other.d_values.iter())
            .map(|(a, b)| a * w + b * lambda)
            .collect();
        PiecewiseControl::relaxed(self.partition.clone(), u_values, d_values)
    }
}

impl ControlDirection {
    pub fn new(
        partition: Partition,
        u_values: Vec<DVector<f64>>,
        d_values: Vec<DVector<f64>>,
    ) -> Result<Self, CoreError> {
        validate_shape(&partition, &u_values, &d_values)?;
        Ok(ControlDirection {
            partition,
            u_values,
            d_values,
        })
    }

    /// Reinterprets a control's values as a direction, for norm queries.
    pub fn from_control(c: &PiecewiseControl) -> Self {
        ControlDirection {
            partition: c.partition.clone(),
            u_values: c.u_values.clone(),
            d_values: c.d_values.clone(),
        }
    }

    pub fn zero(partition: Partition, m: usize, q: usize) -> Self {
        let intervals = partition.num_intervals();
        ControlDirection {
            partition,
            u_values: vec![DVector::zeros(m); intervals],
            d_values: vec![DVector::zeros(q); intervals],
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn u_values(&self) -> &[DVector<f64>] {
        &self.u_values
    }

    pub fn d_values(&self) -> &[DVector<f64>] {
        &self.d_values
    }

    pub fn scaled(&self, factor: f64) -> ControlDirection {
        ControlDirection {
            partition: self.partition.clone(),
            u_values: self.u_values.iter().map(|v| v * factor).collect(),
            d_values: self.d_values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &ControlDirection) -> Result<ControlDirection, CoreError> {
        if !same_partition(&self.partition, &other.partition) {
            return Err(CoreError::PartitionMismatch);
        }
        Ok(ControlDirection {
            partition: self.partition.clone(),
            u_values: self
                .u_values
                .iter()
                .zip(other.u_values.iter())
                .map(|(a, b)| a + b)
                .collect(),
            d_values: self
                .d_values
                .iter()
                .zip(other.d_values.iter())
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}
