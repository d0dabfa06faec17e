//! The relaxed-to-pure projection pipeline: Haar-wavelet partial sums of
//! step signals, pulse-width modulation of relaxed weights, and their
//! composition ρ_N together with the switching partition σ_N it induces.

mod error;
mod haar;
mod pwm;
mod rho;
pub mod synth;

pub use error::ProjectError;
pub use haar::{haar_partial_sum, l2_distance, DyadicSignal, StepSignal};
pub use pwm::{pwm, DyadicWeights};
pub use rho::{project_relaxed, rho, sigma_partition};
