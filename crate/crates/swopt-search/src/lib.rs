//! Backtracking searches for the outer loop: the Armijo step size μ along
//! the descent direction, and the pulse width modulation frequency ν that
//! carries the stepped relaxed control back to a pure switching control.

mod armijo;
mod error;
mod eval;
mod frequency;

pub use armijo::{armijo_step, StepOutcome};
pub use error::SearchError;
pub use frequency::{frequency_search, FrequencyOutcome};
