//! Quantization protocols for history-dependent games.
//!
//! A classical coin `p` is embedded in SU(2) as a superposition of a
//! "no flip" and a "flip" operator:
//!
//! * type 1: `sqrt(p) N + sqrt(1-p) F` with `N = I`, `F = [[0, -conj(eta)], [eta, 0]]`
//! * type 2: `sqrt(p) N* + sqrt(1-p) F*` with `N* = diag(i, -i)`,
//!   `F* = [[0, -conj(i eta)], [i eta, 0]]`
//!
//! where `eta` is a sixth root of unity. The four embedded coins of a game
//! form the blocks of a multiplexer. The proper protocol runs that
//! multiplexer on the state whose history amplitudes are the square roots of
//! the stationary weights; measuring the coin qubit then gives back the
//! classical gain probability. The FNA protocols use a fixed initial state
//! instead and lose the stationary weighting.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::games::{lift_history_free, mix, GameSpec, MixWeight};
use crate::markov::{gain_probability_closed_form, stationary_closed_form, HistoryDistribution};
use crate::qcore::{
    superpose_blocks, CoinOperator, Multiplexer, OutcomeDistribution, QuantumState,
    UnitarityMode, UNITARY_TOL,
};

const ROOT_TOL: f64 = 1e-12;
const WEIGHT_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingKind {
    Type1,
    Type2,
}

/// Embedding kind together with its sixth root of unity `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Embedding {
    kind: EmbeddingKind,
    eta: Complex64,
}

impl Embedding {
    pub fn new(kind: EmbeddingKind, eta: Complex64) -> Result<Self> {
        let is_root = (0..6).any(|k| (eta - sixth_root(k)).norm() <= ROOT_TOL);
        if !is_root {
            return Err(Error::InvalidEmbedding(format!(
                "eta = {eta} is not a sixth root of unity"
            )));
        }
        Ok(Self { kind, eta })
    }

    /// Uses `eta = exp(i pi k / 3)`, `k` in `0..6`.
    pub fn with_root(kind: EmbeddingKind, k: usize) -> Result<Self> {
        if k >= 6 {
            return Err(Error::InvalidEmbedding(format!(
                "root selector must be in 0..6, got {k}"
            )));
        }
        Ok(Self {
            kind,
            eta: sixth_root(k),
        })
    }

    pub fn type1() -> Self {
        Self::default()
    }

    pub fn type2() -> Self {
        Self {
            kind: EmbeddingKind::Type2,
            ..Self::default()
        }
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    fn no_flip(&self) -> CoinOperator {
        let m = match self.kind {
            EmbeddingKind::Type1 => [[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, Complex64::ONE]],
            EmbeddingKind::Type2 => [[I, Complex64::ZERO], [Complex64::ZERO, I.conj()]],
        };
        CoinOperator::new(m).expect("finite")
    }

    fn flip(&self) -> CoinOperator {
        let lower = match self.kind {
            EmbeddingKind::Type1 => self.eta,
            EmbeddingKind::Type2 => I * self.eta,
        };
        CoinOperator::new([[Complex64::ZERO, -lower.conj()], [lower, Complex64::ZERO]])
            .expect("finite")
    }
}

/// Type 1 with the primitive root `exp(i pi / 3)`.
impl Default for Embedding {
    fn default() -> Self {
        Self {
            kind: EmbeddingKind::Type1,
            eta: sixth_root(1),
        }
    }
}

fn sixth_root(k: usize) -> Complex64 {
    match k % 6 {
        0 => Complex64::ONE,
        3 => -Complex64::ONE,
        k => Complex64::from_polar(1.0, PI * k as f64 / 3.0),
    }
}

/// `sqrt(p) N + sqrt(1-p) F` for the chosen embedding.
pub fn embed_coin(p: f64, e: &Embedding) -> Result<CoinOperator> {
    crate::error::check_probability("p", p)?;
    let (s, t) = (p.sqrt(), (1.0 - p).sqrt());
    Ok(superpose_blocks(
        &e.no_flip(),
        &e.flip(),
        Complex64::new(s, 0.0),
        Complex64::new(t, 0.0),
    ))
}

/// A multiplexer tagged with the embedding that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddedGame {
    pub multiplexer: Multiplexer,
    pub embedding: Embedding,
}

pub fn embed_game(g: &GameSpec, e: &Embedding) -> Result<EmbeddedGame> {
    let c = g.coins.as_array();
    let blocks = [
        embed_coin(c[0], e)?,
        embed_coin(c[1], e)?,
        embed_coin(c[2], e)?,
        embed_coin(c[3], e)?,
    ];
    Ok(EmbeddedGame {
        multiplexer: Multiplexer::assemble(blocks),
        embedding: *e,
    })
}

/// `(sqrt(w1), 0, sqrt(w2), 0, sqrt(w3), 0, sqrt(w4), 0) / sqrt(sum w)`.
pub fn initial_state(d: &HistoryDistribution) -> QuantumState {
    let total = d.total();
    let mut amps = [Complex64::ZERO; 8];
    for j in 0..4 {
        amps[2 * j] = Complex64::new((d.get(j) / total).sqrt(), 0.0);
    }
    QuantumState::from_amplitudes(amps).expect("history distribution is nonzero")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolResult {
    pub final_state: QuantumState,
    pub distribution: OutcomeDistribution,
    pub p_gain: f64,
}

impl ProtocolResult {
    fn from_state(final_state: QuantumState) -> Self {
        let distribution = final_state.measure();
        Self {
            final_state,
            distribution,
            p_gain: distribution.gain(),
        }
    }
}

fn run(mux: &Multiplexer, init: &QuantumState, mode: UnitarityMode) -> Result<ProtocolResult> {
    Ok(ProtocolResult::from_state(mux.apply(init, mode)?))
}

/// Proper protocol: embed the coins, start from the stationary state, measure.
pub fn run_proper(g: &GameSpec, e: &Embedding) -> Result<ProtocolResult> {
    let stationary = stationary_closed_form(&g.coins)?;
    let mux = embed_game(g, e)?.multiplexer;
    run(&mux, &initial_state(&stationary.raw), UnitarityMode::Strict)
}

/// Amplitude weights `(g1, g2)` for superposing two multiplexers.
///
/// Only real weights are supported; they satisfy `g1^2 + g2^2 = 1` and
/// `conj(g1) g2 - conj(g2) g1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionWeights {
    g1: Complex64,
    g2: Complex64,
}

impl SuperpositionWeights {
    pub fn new(g1: Complex64, g2: Complex64) -> Result<Self> {
        let squares = g1 * g1 + g2 * g2;
        if (squares - Complex64::ONE).norm() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "g1^2 + g2^2 = {squares}, expected 1"
            )));
        }
        let cross = g1.conj() * g2 - g2.conj() * g1;
        if cross.norm() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "conj(g1) g2 - conj(g2) g1 = {cross}, expected 0"
            )));
        }
        let moduli = g1.norm_sqr() + g2.norm_sqr();
        if (moduli - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "|g1|^2 + |g2|^2 = {moduli}, expected 1 (complex weights are not supported)"
            )));
        }
        Ok(Self { g1, g2 })
    }

    /// `g1 = sqrt(r)`, `g2 = sqrt(1 - r)`.
    pub fn from_probability(r: MixWeight) -> Self {
        let r = r.value();
        Self {
            g1: Complex64::new(r.sqrt(), 0.0),
            g2: Complex64::new((1.0 - r).sqrt(), 0.0),
        }
    }

    pub fn g1(&self) -> Complex64 {
        self.g1
    }

    pub fn g2(&self) -> Complex64 {
        self.g2
    }

    /// Probability weight `|g1|^2` carried by the first multiplexer.
    pub fn r(&self) -> f64 {
        self.g1.norm_sqr()
    }
}

/// Blockwise `g1 M1 + g2 M2`.
///
/// A type-1 and a type-2 multiplexer superpose to a unitary: the factor `i`
/// in the type-2 blocks makes the cross terms cancel. Two multiplexers of the
/// same type generally do not, and strict mode reports that as a unitarity
/// violation.
pub fn superposed_multiplexer(
    m1: &EmbeddedGame,
    m2: &EmbeddedGame,
    w: &SuperpositionWeights,
    mode: UnitarityMode,
) -> Result<Multiplexer> {
    let a = m1.multiplexer.blocks();
    let b = m2.multiplexer.blocks();
    let sigma = Multiplexer::assemble(std::array::from_fn(|j| {
        superpose_blocks(&a[j], &b[j], w.g1, w.g2)
    }));
    if mode == UnitarityMode::Strict {
        let deviation = sigma.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::UnitarityViolation { deviation });
        }
    }
    Ok(sigma)
}

fn require_kind(e: &Embedding, kind: EmbeddingKind, role: &str) -> Result<()> {
    if e.kind == kind {
        Ok(())
    } else {
        Err(Error::InvalidEmbedding(format!(
            "{role} must use a {kind:?} embedding, got {:?}",
            e.kind
        )))
    }
}

/// Superposed protocol for the randomized sequence playing `g1` with
/// probability `r`: `sqrt(r) Q' + sqrt(1-r) Q''` with `Q'` type 1 and `Q''`
/// type 2, started from the stationary state of the classical mix.
pub fn run_superposed(
    g1: &GameSpec,
    g2: &GameSpec,
    r: f64,
    e1: &Embedding,
    e2: &Embedding,
) -> Result<ProtocolResult> {
    require_kind(e1, EmbeddingKind::Type1, "first game")?;
    require_kind(e2, EmbeddingKind::Type2, "second game")?;
    let r = MixWeight::new(r)?;
    let stationary = stationary_closed_form(&mix(g1, g2, r).coins)?;
    let sigma = superposed_multiplexer(
        &embed_game(g1, e1)?,
        &embed_game(g2, e2)?,
        &SuperpositionWeights::from_probability(r),
        UnitarityMode::Strict,
    )?;
    run(&sigma, &initial_state(&stationary.raw), UnitarityMode::Strict)
}

/// Even superposition of the history-free coin `p` (type 2, in every block)
/// with `gb` (type 1), started from the stationary state of their even mix.
pub fn run_special_ab(p: f64, gb: &GameSpec, e: &Embedding) -> Result<ProtocolResult> {
    require_kind(e, EmbeddingKind::Type1, "game B'")?;
    let a = lift_history_free(p)?;
    let half = MixWeight::new(0.5)?;
    let stationary = stationary_closed_form(&mix(&a, gb, half).coins)?;
    let type2 = Embedding::new(EmbeddingKind::Type2, e.eta)?;
    let sigma = superposed_multiplexer(
        &embed_game(&a, &type2)?,
        &embed_game(gb, e)?,
        &SuperpositionWeights::from_probability(half),
        UnitarityMode::Strict,
    )?;
    run(&sigma, &initial_state(&stationary.raw), UnitarityMode::Strict)
}

/// Second proper quantization: embed the mixed coins `r a_j + (1-r) b_j`
/// directly with a type-1 embedding.
pub fn run_second_quantization(
    g1: &GameSpec,
    g2: &GameSpec,
    r: f64,
    e: &Embedding,
) -> Result<ProtocolResult> {
    require_kind(e, EmbeddingKind::Type1, "mixed game")?;
    let mixed = mix(g1, g2, MixWeight::new(r)?);
    run_proper(&mixed, e)
}

/// Fixed initial states used by the FNA protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnaInit {
    /// `|000>`
    Basic000,
    /// `(|000> + |111>)/sqrt(2)`
    MaximallyEntangled,
}

impl FnaInit {
    pub fn state(self) -> QuantumState {
        match self {
            FnaInit::Basic000 => QuantumState::basis(0),
            FnaInit::MaximallyEntangled => QuantumState::maximally_entangled(),
        }
    }
}

/// The embedded game applied to a fixed initial state. Not proper: the
/// result ignores the stationary weighting of histories.
pub fn run_fna(g: &GameSpec, init: FnaInit, e: &Embedding) -> Result<ProtocolResult> {
    let mux = embed_game(g, e)?.multiplexer;
    run(&mux, &init.state(), UnitarityMode::Strict)
}

/// `|FNA p_gain - classical p_gain|`.
pub fn improperness_gap(g: &GameSpec, init: FnaInit, e: &Embedding) -> Result<f64> {
    let classical = gain_probability_closed_form(&g.coins)?;
    Ok((run_fna(g, init, e)?.p_gain - classical).abs())
}
