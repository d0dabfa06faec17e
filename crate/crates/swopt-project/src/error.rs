use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("step signal needs times spanning [0, 1] with one value per interval, got {times} times and {values} values")]
    BadSignal { times: usize, values: usize },

    #[error("step signal times must be nondecreasing in [0, 1] (sample {index} is {value})")]
    BadSignalTime { index: usize, value: f64 },

    #[error(
        "projected weights left the simplex band at cell {index} (value {value}): \
         this indicates a projection bug, not a data condition"
    )]
    SimplexViolation { index: usize, value: f64 },

    #[error("weights at level {weights_level} cannot drive a PWM frame grid at level {frame_level}")]
    FrameTooFine { frame_level: u32, weights_level: u32 },

    #[error("input box has {got} components, control has {expected}")]
    BoxMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Core(#[from] swopt_core::CoreError),
}
