use thiserror::Error;

/// Errors raised by the game, Markov and quantum layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid operand: {0}")]
    InvalidOperand(String),

    #[error("{name} = {value} is not a probability in [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(&'static str),

    #[error("degenerate chain: stationary weights vanish for coins {coins:?}")]
    DegenerateChain { coins: [f64; 4] },

    #[error("stationary state is not unique (null-space dimension {dimension})")]
    AmbiguousStationary { dimension: usize },

    #[error("operator is not unitary (max |U^dag U - I| = {deviation:e})")]
    UnitarityViolation { deviation: f64 },

    #[error("input state norm drifted by {drift:e}, limit is {limit:e}")]
    NormDrift { drift: f64, limit: f64 },

    #[error("invalid embedding parameter: {0}")]
    InvalidEmbedding(String),

    #[error("invalid superposition weights: {0}")]
    InvalidWeights(String),

    #[error("eps = {0} is outside (0, 1/168), the range where the canonical example holds")]
    EpsOutOfRange(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::ProbabilityOutOfRange { name, value })
    }
}
