//! Seeded trajectory simulation of the capital process.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, so a `(game, config)` pair always produces
//! the same trajectory. A coin with gain probability `p` gains when a uniform
//! draw from `[0, 1)` is below `p`. Mixed play draws a second uniform per step
//! first, choosing the first game when it is below `r`.
//!
//! Independent streams for concurrent runs come from [`split_seed`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::games::{GameSpec, MixWeight};
use crate::markov::HistoryDistribution;

/// Two-stage history, (outcome at t-2, outcome at t-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum History {
    #[default]
    GG,
    GL,
    LG,
    LL,
}

impl History {
    pub const ALL: [History; 4] = [History::GG, History::GL, History::LG, History::LL];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index & 3]
    }

    /// History after an outcome: the last outcome shifts to t-2.
    pub fn advance(self, gained: bool) -> Self {
        let last = self.index() & 1;
        Self::from_index((last << 1) | usize::from(!gained))
    }
}

impl FromStr for History {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GG" => Ok(History::GG),
            "GL" => Ok(History::GL),
            "LG" => Ok(History::LG),
            "LL" => Ok(History::LL),
            _ => Err(Error::InvalidOperand(format!(
                "unknown history {s:?}, expected GG, GL, LG or LL"
            ))),
        }
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Counted steps, after burn-in.
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub initial_history: History,
}

impl SimConfig {
    pub const DEFAULT_BURN_IN: u64 = 1_000;

    pub fn new(steps: u64, seed: u64) -> Self {
        Self {
            steps,
            burn_in: Self::DEFAULT_BURN_IN,
            seed,
            initial_history: History::GG,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidOperand("steps must be positive".into()));
        }
        if self.steps.checked_add(self.burn_in).is_none() {
            return Err(Error::InvalidOperand("steps + burn_in overflows".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats {
    pub steps: u64,
    pub gains: u64,
    pub empirical_p_gain: f64,
    /// Fraction of counted steps spent in each history.
    pub occupancy: HistoryDistribution,
    /// Capital change over the counted steps.
    pub final_capital: i64,
    pub seed: u64,
}

impl TrajectoryStats {
    /// Binomial standard error of `empirical_p_gain` around `p`.
    pub fn binomial_sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.steps as f64).sqrt()
    }
}

/// SplitMix64 finalizer applied to `seed + (stream + 1) * golden_gamma`.
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run<F>(cfg: &SimConfig, mut coin: F) -> Result<TrajectoryStats>
where
    F: FnMut(&mut ChaCha8Rng, History) -> f64,
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut history = cfg.initial_history;

    for _ in 0..cfg.burn_in {
        let p = coin(&mut rng, history);
        history = history.advance(rng.random::<f64>() < p);
    }

    let mut visits = [0u64; 4];
    let mut gains = 0u64;
    for _ in 0..cfg.steps {
        visits[history.index()] += 1;
        let p = coin(&mut rng, history);
        let gained = rng.random::<f64>() < p;
        gains += u64::from(gained);
        history = history.advance(gained);
    }

    let steps = cfg.steps;
    let occupancy = HistoryDistribution::normalized(visits.map(|v| v as f64))?;
    Ok(TrajectoryStats {
        steps,
        gains,
        empirical_p_gain: gains as f64 / steps as f64,
        occupancy,
        final_capital: 2 * gains as i64 - steps as i64,
        seed: cfg.seed,
    })
}

/// Plays `g` for `cfg.burn_in + cfg.steps` rounds, collecting statistics
/// over the last `cfg.steps`.
pub fn simulate(g: &GameSpec, cfg: &SimConfig) -> Result<TrajectoryStats> {
    let coins = g.coins;
    run(cfg, |_, h| coins.get(h.index()))
}

/// Each round plays `g1` with probability `r`, otherwise `g2`.
pub fn simulate_mixed(
    g1: &GameSpec,
    g2: &GameSpec,
    r: MixWeight,
    cfg: &SimConfig,
) -> Result<TrajectoryStats> {
    let (c1, c2, r) = (g1.coins, g2.coins, r.value());
    run(cfg, |rng, h| {
        if rng.random::<f64>() < r {
            c1.get(h.index())
        } else {
            c2.get(h.index())
        }
    })
}
