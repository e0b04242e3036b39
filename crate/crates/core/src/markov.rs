//! The history process of a two-stage game as a 4-state Markov chain.
//!
//! Histories are indexed 0..4 as (outcome at t-2, outcome at t-1) =
//! GG, GL, LG, LL. Coin `j` is flipped when the history is `j`. The
//! transition matrix is column-stochastic: column `j` holds the distribution
//! of the next history given the current history `j`.

use std::fmt;

use nalgebra::{Matrix4, Vector4};

use crate::error::{check_probability, Error, Result};

/// Default half-width of the "fair" band around 1/2 for analytic inputs.
pub const DEFAULT_FAIRNESS_TOL: f64 = 1e-12;

const STOCHASTIC_TOL: f64 = 1e-12;
const NULLITY_TOL: f64 = 1e-10;

/// Gain probabilities of the four history coins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinSet([f64; 4]);

impl CoinSet {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        const NAMES: [&str; 4] = ["p1", "p2", "p3", "p4"];
        for (name, &value) in NAMES.iter().zip(&p) {
            check_probability(name, value)?;
        }
        Ok(Self(p))
    }

    pub fn uniform(p: f64) -> Result<Self> {
        Self::new([p; 4])
    }

    pub fn get(&self, history: usize) -> f64 {
        self.0[history]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    /// The same coins with history labels reversed (GG <-> LL, GL <-> LG).
    pub fn reversed(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([d, c, b, a])
    }

    /// Coinwise `r*self + (1-r)*other`.
    pub fn convex(&self, other: &Self, r: f64) -> Self {
        Self(std::array::from_fn(|j| r * self.0[j] + (1.0 - r) * other.0[j]))
    }
}

/// Column-stochastic 4x4 matrix, `entries[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    entries: [[f64; 4]; 4],
}

impl TransitionMatrix {
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        for row in &entries {
            for &x in row {
                check_probability("transition entry", x)?;
            }
        }
        for col in 0..4 {
            let sum: f64 = entries.iter().map(|row| row[col]).sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidOperand(format!(
                    "column {col} sums to {sum}, not 1"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_coins(c: &CoinSet) -> Self {
        let [p1, p2, p3, p4] = c.0;
        Self {
            entries: [
                [p1, 0.0, p3, 0.0],
                [1.0 - p1, 0.0, 1.0 - p3, 0.0],
                [0.0, p2, 0.0, p4],
                [0.0, 1.0 - p2, 0.0, 1.0 - p4],
            ],
        }
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    /// `r*a + (1-r)*b`, entrywise.
    pub fn convex(a: &Self, b: &Self, r: f64) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = r * a.entries[i][j] + (1.0 - r) * b.entries[i][j];
            }
        }
        Self { entries }
    }

    pub fn apply(&self, v: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|j| self.entries[i][j] * v[j]).sum())
    }
}

pub fn transition_matrix(c: &CoinSet) -> TransitionMatrix {
    TransitionMatrix::from_coins(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    L1,
}

/// Nonnegative weights over the four histories, not all zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryDistribution {
    weights: [f64; 4],
    normalization: Normalization,
}

impl HistoryDistribution {
    pub fn raw(weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidOperand(format!(
                "history weights must be finite and nonnegative, got {weights:?}"
            )));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::DegenerateState("history weights are all zero"));
        }
        Ok(Self {
            weights,
            normalization: Normalization::Raw,
        })
    }

    /// L1-normalizes `weights`.
    pub fn normalized(weights: [f64; 4]) -> Result<Self> {
        Ok(Self::raw(weights)?.to_normalized())
    }

    pub fn uniform() -> Self {
        Self {
            weights: [0.25; 4],
            normalization: Normalization::L1,
        }
    }

    pub fn to_normalized(&self) -> Self {
        if self.normalization == Normalization::L1 {
            return *self;
        }
        let total = self.total();
        Self {
            weights: self.weights.map(|w| w / total),
            normalization: Normalization::L1,
        }
    }

    pub fn weights(&self) -> &[f64; 4] {
        &self.weights
    }

    pub fn get(&self, history: usize) -> f64 {
        self.weights[history]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization == Normalization::L1
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }
}

/// Closed-form stationary state: raw weights and their L1 sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryState {
    pub raw: HistoryDistribution,
    /// `(1-p1)(2p4+1-p2) + p3p4`, the sum of the raw weights.
    pub normalizer: f64,
}

impl StationaryState {
    pub fn distribution(&self) -> HistoryDistribution {
        self.raw.to_normalized()
    }
}

/// Stationary weights `(p3p4, p4(1-p1), p4(1-p1), (1-p1)(1-p2))`.
///
/// Fails with [`Error::DegenerateChain`] when all four weights vanish, which
/// happens when the chain has two closed classes (e.g. `p1 = 1, p4 = 0`).
pub fn stationary_closed_form(c: &CoinSet) -> Result<StationaryState> {
    let [p1, p2, p3, p4] = c.0;
    let weights = [p3 * p4, p4 * (1.0 - p1), p4 * (1.0 - p1), (1.0 - p1) * (1.0 - p2)];
    let raw = HistoryDistribution::raw(weights)
        .map_err(|_| Error::DegenerateChain { coins: c.0 })?;
    Ok(StationaryState {
        raw,
        normalizer: (1.0 - p1) * (2.0 * p4 + 1.0 - p2) + p3 * p4,
    })
}

/// Stationary distribution by direct linear solve of `(X - I)s = 0`,
/// `sum(s) = 1`. Independent of the closed form.
pub fn stationary_solve(t: &TransitionMatrix) -> Result<HistoryDistribution> {
    let x = Matrix4::from_fn(|i, j| t.entries[i][j]);
    let a = x - Matrix4::identity();

    let singular = a.singular_values();
    let scale = singular.max().max(1.0);
    let dimension = singular.iter().filter(|s| **s <= NULLITY_TOL * scale).count();
    if dimension != 1 {
        return Err(Error::AmbiguousStationary { dimension });
    }

    let mut system = a;
    system.set_row(3, &nalgebra::RowVector4::repeat(1.0));
    let rhs = Vector4::new(0.0, 0.0, 0.0, 1.0);
    let s = system
        .lu()
        .solve(&rhs)
        .ok_or(Error::AmbiguousStationary { dimension: 0 })?;
    // round-off can leave entries at -1e-17 for vanishing weights
    let weights = std::array::from_fn(|i| s[i].max(0.0));
    HistoryDistribution::normalized(weights)
}

/// `sum(w_j p_j) / sum(w_j)`; identical for raw and normalized weights.
pub fn gain_probability(c: &CoinSet, d: &HistoryDistribution) -> f64 {
    let weighted: f64 = (0..4).map(|j| d.get(j) * c.get(j)).sum();
    weighted / d.total()
}

/// `p4(p3+1-p1) / ((1-p1)(2p4+1-p2) + p3p4)`, the long-run gain probability.
pub fn gain_probability_closed_form(c: &CoinSet) -> Result<f64> {
    let stationary = stationary_closed_form(c)?;
    let [p1, _, p3, p4] = c.0;
    Ok(p4 * (p3 + 1.0 - p1) / stationary.normalizer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Winning,
    Fair,
    Losing,
}

impl Outcome {
    pub fn from_gain(p_gain: f64, tol: f64) -> Self {
        if p_gain > 0.5 + tol {
            Outcome::Winning
        } else if p_gain < 0.5 - tol {
            Outcome::Losing
        } else {
            Outcome::Fair
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Winning => "winning",
            Outcome::Fair => "fair",
            Outcome::Losing => "losing",
        })
    }
}

/// `x = (1-p1)(1-p2) - p3p4` and `y = p4(p3+1-p1)`; `p_gain = 1/(2 + x/y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameReport {
    pub p_gain: f64,
    /// `None` when `y <= 0`, which only happens for boundary coins.
    pub diagnostics: Option<Diagnostics>,
    pub class: Outcome,
}

/// Classifies a game by its long-run gain probability.
///
/// The class is decided by `p_gain` against 1/2, never by the sign of `x`.
pub fn classify(c: &CoinSet, fairness_tol: f64) -> Result<GameReport> {
    if fairness_tol.is_nan() || fairness_tol < 0.0 {
        return Err(Error::InvalidOperand(format!(
            "fairness tolerance must be nonnegative, got {fairness_tol}"
        )));
    }
    let [p1, p2, p3, p4] = c.0;
    let x = (1.0 - p1) * (1.0 - p2) - p3 * p4;
    let y = p4 * (p3 + 1.0 - p1);
    let (p_gain, diagnostics) = if y > 0.0 {
        (1.0 / (2.0 + x / y), Some(Diagnostics { x, y }))
    } else {
        let stationary = stationary_closed_form(c)?;
        (gain_probability(c, &stationary.raw), None)
    };
    Ok(GameReport {
        p_gain,
        diagnostics,
        class: Outcome::from_gain(p_gain, fairness_tol),
    })
}

/// `(pi_1 p_1, pi_1 (1-p_1), ..., pi_4 (1-p_4))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffProfile {
    pub entries: [f64; 8],
    /// Set when the supplied distribution was not normalized and had to be.
    pub renormalized: bool,
}

impl PayoffProfile {
    /// Mass on gaining slots (even indices).
    pub fn gain_mass(&self) -> f64 {
        self.entries.iter().step_by(2).sum()
    }
}

pub fn payoff_profile(c: &CoinSet, d: &HistoryDistribution) -> PayoffProfile {
    let renormalized = !d.is_normalized();
    let pi = d.to_normalized();
    let mut entries = [0.0; 8];
    for j in 0..4 {
        entries[2 * j] = pi.get(j) * c.get(j);
        entries[2 * j + 1] = pi.get(j) * (1.0 - c.get(j));
    }
    PayoffProfile {
        entries,
        renormalized,
    }
}
