//! Building, mixing and comparing history-dependent games.

use crate::error::{check_probability, Error, Result};
use crate::markov::{classify, CoinSet, GameReport, Outcome};

/// Upper bound (exclusive) on the bias for which the canonical example
/// shows the effect.
pub const CANONICAL_EPS_BOUND: f64 = 1.0 / 168.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    pub coins: CoinSet,
    pub label: String,
}

impl GameSpec {
    pub fn new(coins: CoinSet, label: impl Into<String>) -> Self {
        Self {
            coins,
            label: label.into(),
        }
    }

    pub fn from_coins(p: [f64; 4], label: impl Into<String>) -> Result<Self> {
        Ok(Self::new(CoinSet::new(p)?, label))
    }
}

/// Probability `r` of playing the first game at each step.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MixWeight(f64);

impl MixWeight {
    pub fn new(r: f64) -> Result<Self> {
        check_probability("r", r).map(Self)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A history-free coin seen as a history-dependent game with four equal coins.
pub fn lift_history_free(p: f64) -> Result<GameSpec> {
    check_probability("p", p)?;
    Ok(GameSpec::new(CoinSet::uniform(p)?, format!("A'(p={p})")))
}

/// The randomized sequence that plays `g1` with probability `r` and `g2`
/// otherwise, as a single game with coins `r*a_j + (1-r)*b_j`.
pub fn mix(g1: &GameSpec, g2: &GameSpec, r: MixWeight) -> GameSpec {
    let r = r.value();
    let coins = g1.coins.convex(&g2.coins, r);
    GameSpec::new(coins, format!("mix(r={r}; {}, {})", g1.label, g2.label))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParrondoReport {
    pub report_1: GameReport,
    pub report_2: GameReport,
    pub report_mix: GameReport,
    /// Both components losing and the mix winning.
    pub effect: bool,
}

pub fn parrondo_effect(
    g1: &GameSpec,
    g2: &GameSpec,
    r: MixWeight,
    tol: f64,
) -> Result<ParrondoReport> {
    let report_1 = classify(&g1.coins, tol)?;
    let report_2 = classify(&g2.coins, tol)?;
    let report_mix = classify(&mix(g1, g2, r).coins, tol)?;
    let effect = report_1.class == Outcome::Losing
        && report_2.class == Outcome::Losing
        && report_mix.class == Outcome::Winning;
    Ok(ParrondoReport {
        report_1,
        report_2,
        report_mix,
        effect,
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < CANONICAL_EPS_BOUND {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

/// The original example: `A'` with `p = 1/2 - eps` and `B'` with coins
/// `7/10 - eps, 1/4 - eps, 1/4 - eps, 9/10 - eps` on GG, GL, LG, LL.
///
/// The coin list is the commonly quoted `9/10, 1/4, 1/4, 7/10` with the
/// history labels reversed, so that the loss-loss history carries the
/// favourable coin. Under that assignment both games lose and the even
/// mix wins. [`canonical_example_literal`] keeps the unreversed labels.
pub fn canonical_example(eps: f64) -> Result<(GameSpec, GameSpec)> {
    check_eps(eps)?;
    let a = lift_history_free(0.5 - eps)?;
    let b = GameSpec::from_coins(
        [0.7 - eps, 0.25 - eps, 0.25 - eps, 0.9 - eps],
        format!("B'(eps={eps}, history-reversed 9/10,1/4,1/4,7/10)"),
    )?;
    Ok((a, b))
}

/// The canonical coin list read with literal labels: GG gets `9/10 - eps`.
/// `B'` is then a winning game and no effect appears.
pub fn canonical_example_literal(eps: f64) -> Result<(GameSpec, GameSpec)> {
    let (a, b) = canonical_example(eps)?;
    let literal = GameSpec::new(
        b.coins.reversed(),
        format!("B'(eps={eps}, literal 9/10,1/4,1/4,7/10)"),
    );
    Ok((a, literal))
}

/// `eps = 0` variant of the canonical example, used to check the fair limit.
pub(crate) fn canonical_unbiased() -> (GameSpec, GameSpec) {
    let a = GameSpec::new(CoinSet::uniform(0.5).expect("valid"), "A'(p=0.5)");
    let b = GameSpec::from_coins([0.7, 0.25, 0.25, 0.9], "B'(eps=0)").expect("valid");
    (a, b)
}
