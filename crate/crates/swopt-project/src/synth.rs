//! Seeded generators for projection tests. Everything produced here is
//! exactly representable: weights are multiples of 2^-16, continuous
//! values multiples of 2^-12, and breakpoints dyadic, so products and
//! telescoping sums computed from them incur no floating-point error.

use nalgebra::DVector;
use rand::Rng;
use swopt_core::{Partition, PiecewiseControl};

use crate::haar::StepSignal;

/// A simplex row whose entries are multiples of 2^-16 and sum to exactly 1,
/// built from sorted cut points on the integer range 0..=65536.
pub fn dyadic_simplex_row<R: Rng>(rng: &mut R, q: usize) -> DVector<f64> {
    let mut cuts: Vec<u32> = (0..q - 1).map(|_| rng.gen_range(0..=65536)).collect();
    cuts.sort_unstable();
    cuts.push(65536);
    let mut row = DVector::zeros(q);
    let mut prev = 0u32;
    for (i, &c) in cuts.iter().enumerate() {
        row[i] = f64::from(c - prev) / 65536.0;
        prev = c;
    }
    row
}

/// The full dyadic grid at `level`, with a few extra level-(level+2)
/// points spliced in so the partition is not uniform.
pub fn dyadic_partition<R: Rng>(rng: &mut R, level: u32) -> Partition {
    let fine = 0.5f64.powi(level as i32 + 2);
    let mut samples: Vec<f64> = Vec::new();
    for j in 0..(1u64 << level) {
        samples.push(j as f64 * 0.5f64.powi(level as i32));
        if rng.gen_bool(0.3) {
            let offset = rng.gen_range(1..4);
            samples.push(j as f64 * 0.5f64.powi(level as i32) + f64::from(offset) * fine);
        }
    }
    samples.push(1.0);
    Partition::new(samples, level).expect("grid refinement stays within the declared mesh")
}

/// A multiple of 2^-12 drawn from [lo, hi]; lo and hi are snapped onto
/// that grid first.
pub fn dyadic_value<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let lo_i = (lo * 4096.0).ceil() as i64;
    let hi_i = (hi * 4096.0).floor() as i64;
    rng.gen_range(lo_i..=hi_i) as f64 / 4096.0
}

/// A relaxed control on a dyadic partition with exactly-representable
/// inputs and weights.
pub fn dyadic_relaxed_control<R: Rng>(
    rng: &mut R,
    level: u32,
    m: usize,
    q: usize,
    u_box: &[(f64, f64)],
) -> PiecewiseControl {
    let partition = dyadic_partition(rng, level);
    let intervals = partition.num_intervals();
    let u_values = (0..intervals)
        .map(|_| DVector::from_fn(m, |j, _| dyadic_value(rng, u_box[j].0, u_box[j].1)))
        .collect();
    let d_values = (0..intervals).map(|_| dyadic_simplex_row(rng, q)).collect();
    PiecewiseControl::relaxed(partition, u_values, d_values)
        .expect("generated rows lie on the simplex")
}

/// A scalar step signal with dyadic breakpoints and values on the 2^-12
/// grid inside [lo, hi].
pub fn dyadic_step_signal<R: Rng>(rng: &mut R, level: u32, lo: f64, hi: f64) -> StepSignal {
    let partition = dyadic_partition(rng, level);
    let values = (0..partition.num_intervals())
        .map(|_| dyadic_value(rng, lo, hi))
        .collect();
    StepSignal::new(partition.samples().to_vec(), values)
        .expect("partition samples form a valid signal grid")
}
