use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parrondo_core::{CoinSet, History};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "parrondo",
    version,
    about = "History-dependent Parrondo games: Markov analysis, proper quantizations, simulation and sweeps",
    after_help = "Any subcommand also accepts --config FILE with flat `key = value` lines named after the flags; \
                  flags given on the command line take precedence."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a game (or two games and their mix) from its stationary state.
    #[command(args_override_self = true)]
    Analyze(AnalyzeArgs),
    /// Run a quantization protocol and compare with the classical gain.
    #[command(args_override_self = true)]
    Quantize(QuantizeArgs),
    /// Run the built-in identity checks.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Simulate a trajectory and compare with the analytic gain.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Scan a grid of (eps, r) and write CSV and optionally SVG.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Compare both fixed-initial-state protocols against the classical gain.
    #[command(args_override_self = true)]
    CompareFna(CompareFnaArgs),
}

/// Four comma-separated coin probabilities, checked to lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coins(pub CoinSet);

impl FromStr for Coins {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let p: [f64; 4] = values
            .try_into()
            .map_err(|v: Vec<f64>| format!("expected four probabilities, got {}", v.len()))?;
        CoinSet::new(p).map(Coins).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    A,
    B,
}

/// A single game: explicit coins or one game of the canonical example.
#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    /// Coins for histories GG, GL, LG, LL.
    #[arg(long, value_name = "P1,P2,P3,P4")]
    pub coins: Option<Coins>,
    /// Use the canonical example (needs --eps).
    #[arg(long)]
    pub canonical: bool,
    /// Bias of the canonical example, in (0, 1/168).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Canonical game to use when only one game is needed.
    #[arg(long, value_enum, default_value = "b")]
    pub which: Which,
}

/// Second game and mixing probability for two-game commands.
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Coins of the second game.
    #[arg(long, value_name = "P1,P2,P3,P4")]
    pub coins2: Option<Coins>,
    /// Probability of playing the first game.
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EmbeddingArgs {
    /// Sixth root of unity exp(i pi k / 3) used as eta.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=5))]
    pub eta: u8,
    /// Embedding kind for single-game protocols.
    #[arg(long, value_enum, default_value = "type1")]
    pub embedding: Kind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Proper,
    Superposed,
    Second,
    Special,
    Fna,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    Basic000,
    Ghz,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub pair: PairArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    #[arg(long, value_enum, default_value = "proper")]
    pub protocol: Protocol,
    /// Initial state for the fna protocol.
    #[arg(long, value_enum, default_value = "basic000")]
    pub init: Init,
    /// History-free coin for the special protocol (canonical: 1/2 - eps).
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareFnaArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random games per check.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Shift applied to the quantum-side coins; nonzero values must fail.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
    #[arg(long, env = "PARRONDO_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Steps per Monte Carlo check.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub mc_steps: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1_000)]
    pub burn_in: u64,
    #[arg(long, env = "PARRONDO_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "GG")]
    pub initial_history: History,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantumProtocol {
    Second,
    Superposed,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Canonical games A' and B' at each eps.
    #[arg(long)]
    pub canonical: bool,
    /// First game; each coin is lowered by eps (clamped to [0, 1]).
    #[arg(long, value_name = "P1,P2,P3,P4")]
    pub coins: Option<Coins>,
    /// Second game, shifted like --coins.
    #[arg(long, value_name = "P1,P2,P3,P4")]
    pub coins2: Option<Coins>,
    #[arg(long, value_name = "LO:HI:N")]
    pub eps: String,
    #[arg(long, value_name = "LO:HI:N")]
    pub r: String,
    /// CSV output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG heatmap output path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also compare a quantum protocol against the classical mix per cell.
    #[arg(long)]
    pub quantum_check: bool,
    #[arg(long, value_enum, default_value = "second")]
    pub quantum_protocol: QuantumProtocol,
}
