//! Two-stage history-dependent Parrondo games and their quantizations.
//!
//! The classical side models a game as a 4-state Markov chain over the last
//! two outcomes ([`markov`]), builds and mixes games ([`games`]) and checks the
//! analytic results against a seeded trajectory simulator ([`montecarlo`]).
//!
//! The quantum side ([`qcore`], [`protocols`]) embeds the four history coins
//! into the 2x2 blocks of a 3-qubit multiplexer. Acting on an initial state
//! built from the stationary distribution, the multiplexer reproduces the
//! classical gain probability on measurement. Fixed initial states such as
//! `|000>` or `(|000> + |111>)/sqrt(2)` do not.
//!
//! ```
//! use parrondo_core::{canonical_example, gain_probability_closed_form, run_proper, Embedding};
//!
//! let (_a, b) = canonical_example(0.005).unwrap();
//! let quantum = run_proper(&b, &Embedding::default()).unwrap();
//! let classical = gain_probability_closed_form(&b.coins).unwrap();
//! assert!((quantum.p_gain - classical).abs() < 1e-12);
//! ```

pub mod error;
pub mod games;
pub mod markov;
pub mod montecarlo;
pub mod protocols;
pub mod qcore;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use games::{
    canonical_example, canonical_example_literal, lift_history_free, mix, parrondo_effect,
    GameSpec, MixWeight, ParrondoReport, CANONICAL_EPS_BOUND,
};
pub use markov::{
    classify, gain_probability, gain_probability_closed_form, payoff_profile,
    stationary_closed_form, stationary_solve, transition_matrix, CoinSet, Diagnostics,
    GameReport, HistoryDistribution, Normalization, Outcome, PayoffProfile, StationaryState, TransitionMatrix,
    DEFAULT_FAIRNESS_TOL,
};
pub use montecarlo::{simulate, simulate_mixed, split_seed, History, SimConfig, TrajectoryStats};
pub use protocols::{
    embed_coin, embed_game, improperness_gap, initial_state, run_fna, run_proper,
    run_second_quantization, run_special_ab, run_superposed, superposed_multiplexer,
    EmbeddedGame, Embedding, EmbeddingKind, FnaInit, ProtocolResult, SuperpositionWeights,
};
pub use qcore::{
    assemble_multiplexer, gain_probability_of, is_unitary, measure, superpose_blocks, Amplitude, CoinOperator, Multiplexer,
    OutcomeDistribution, QuantumState, UnitarityMode, GAIN_INDICES, NORM_DRIFT_TOL, UNITARY_TOL,
};
pub use sweep::{
    extract_region, grid_scan, CellStatus, GridRange, QuantumCheck, RegionRow, SweepBase,
    SweepCell, SweepSpec,
};
pub use verify::{run_suite, CheckOutcome, VerifyConfig};
