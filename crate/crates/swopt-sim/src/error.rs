use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("state blew up at sample {sample} (normalized t = {time}): a component exceeded 1e12 or went non-finite")]
    NonFinite { sample: usize, time: f64 },

    #[error("interpolation time {t} outside [0, 1]")]
    OutOfRange { t: f64 },

    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
}
