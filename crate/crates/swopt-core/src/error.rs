use thiserror::Error;

/// Errors raised while constructing or combining the domain types.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("partition needs at least two samples")]
    TooFewSamples,

    #[error("partition must span [0, 1], got [{first}, {last}]")]
    BadEndpoints { first: f64, last: f64 },

    #[error("partition sample {index} is {value}, below its predecessor {previous}")]
    NotNondecreasing {
        index: usize,
        value: f64,
        previous: f64,
    },

    #[error("partition mesh {mesh} exceeds the 2^-{level} bound for its level")]
    MeshTooCoarse { mesh: f64, level: u32 },

    #[error("non-finite time at sample {index}")]
    NonFiniteTime { index: usize },

    #[error("expected {expected} interval values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("inconsistent vector dimension at interval {index}: expected {expected}, got {got}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry in interval {index}")]
    NonFiniteValue { index: usize },

    #[error("interval {index}: weight {value} outside [0, 1] beyond the 1e-9 tolerance")]
    WeightOutOfRange { index: usize, value: f64 },

    #[error("interval {index}: weights sum to {sum}, not 1 within 1e-9")]
    WeightSumOff { index: usize, sum: f64 },

    #[error("interval {index}: pure weights must be exactly one 1 and the rest 0")]
    NotPure { index: usize },

    #[error("controls live on different partitions")]
    PartitionMismatch,

    #[error("target partition misses breakpoint {value} of the source")]
    NonRefinement { value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
