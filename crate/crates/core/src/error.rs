use thiserror::Error;

/// Errors raised by the modem, detectors and simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("value {0} is not a point of the alphabet")]
    NotInAlphabet(String),

    #[error("interference is undefined for a carrier onto itself (n = m = {0})")]
    SelfInterference(i64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("subsystem index {k} out of range for {subsystems} interleaved systems")]
    SubsystemOutOfRange { k: usize, subsystems: usize },

    #[error("search space of {size} candidates exceeds the limit of {limit}")]
    Capacity { size: u128, limit: u128 },

    #[error("no closed-form error rate for alphabet `{0}`")]
    UnsupportedAlphabet(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
