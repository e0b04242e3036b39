//! Self-check suite behind `parrondo verify`.
//!
//! Each check draws random games from a seeded generator, evaluates one
//! identity and reports the worst deviation seen against its tolerance.
//! `perturb` shifts the coins fed to the quantum side of the properness
//! checks; any nonzero value should make those checks fail.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::games::{canonical_example, canonical_unbiased, lift_history_free, mix, GameSpec, MixWeight};
use crate::markov::{
    classify, gain_probability, stationary_closed_form, stationary_solve, transition_matrix,
    CoinSet, Outcome, DEFAULT_FAIRNESS_TOL,
};
use crate::montecarlo::{simulate, simulate_mixed, split_seed, SimConfig};
use crate::protocols::{
    embed_game, improperness_gap, initial_state, run_fna, run_proper, run_second_quantization,
    run_special_ab, run_superposed, superposed_multiplexer, Embedding, EmbeddingKind, FnaInit,
    SuperpositionWeights,
};
use crate::qcore::{UnitarityMode, UNITARY_TOL};

pub const PROPERNESS_TOL: f64 = 1e-12;
pub const SOLVER_TOL: f64 = 1e-10;
pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const CANONICAL_TOL: f64 = 1e-4;
/// Three binomial standard errors at 10^6 steps, rounded up.
pub const MONTE_CARLO_TOL: f64 = 0.0016;
pub const MONTE_CARLO_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub perturb: f64,
    pub monte_carlo_steps: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 42,
            perturb: 0.0,
            monte_carlo_steps: MONTE_CARLO_STEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst deviation against `tolerance`; for threshold checks (FNA gap) the
    /// smallest margin found.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
    pub elapsed: Duration,
}

/// Coins uniform in (0.01, 0.99).
pub fn random_coins(rng: &mut impl Rng) -> CoinSet {
    CoinSet::new(std::array::from_fn(|_| rng.random_range(0.01..0.99))).expect("in range")
}

fn random_game(rng: &mut impl Rng, label: &str) -> GameSpec {
    GameSpec::new(random_coins(rng), label)
}

fn perturbed(g: &GameSpec, delta: f64) -> GameSpec {
    let coins = CoinSet::new(g.coins.as_array().map(|p| (p + delta).clamp(0.0, 1.0))).expect("clamped");
    GameSpec::new(coins, g.label.clone())
}

struct Check {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            ok: true,
            notes: Vec::new(),
        }
    }

    fn deviation(&mut self, d: f64) {
        if d.is_nan() || d > self.worst {
            self.worst = d;
        }
        if d.is_nan() || d > self.tolerance {
            self.ok = false;
        }
    }

    fn require(&mut self, cond: bool, note: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    fn finish(self, started: Instant, result: Result<()>) -> CheckOutcome {
        let mut notes = self.notes;
        let passed = match result {
            Ok(()) => self.ok,
            Err(e) => {
                notes.push(format!("error: {e}"));
                false
            }
        };
        CheckOutcome {
            name: self.name,
            passed,
            worst: self.worst,
            tolerance: self.tolerance,
            detail: notes.join("; "),
            elapsed: started.elapsed(),
        }
    }
}

fn timed(name: &'static str, tol: f64, body: impl FnOnce(&mut Check) -> Result<()>) -> CheckOutcome {
    let started = Instant::now();
    let mut check = Check::new(name, tol);
    let result = body(&mut check);
    check.finish(started, result)
}

fn proper(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("proper protocol reproduces classical gain", PROPERNESS_TOL, |c| {
        let e = Embedding::default();
        for _ in 0..cfg.trials {
            let g = random_game(rng, "B'");
            let classical = classify(&g.coins, 0.0)?.p_gain;
            let stationary = stationary_closed_form(&g.coins)?;
            let mux = embed_game(&perturbed(&g, cfg.perturb), &e)?.multiplexer;
            let out = mux.apply(&initial_state(&stationary.raw), UnitarityMode::Strict)?;
            c.deviation((out.measure().gain() - classical).abs());
        }
        Ok(())
    })
}

fn superposed(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("superposed protocol reproduces mixed gain", PROPERNESS_TOL, |c| {
        let (e1, e2) = (Embedding::type1(), Embedding::type2());
        for _ in 0..cfg.trials {
            let g1 = random_game(rng, "B'");
            let g2 = random_game(rng, "B''");
            let r = MixWeight::new(rng.random::<f64>())?;
            let classical = classify(&mix(&g1, &g2, r).coins, 0.0)?.p_gain;
            let sigma = superposed_multiplexer(
                &embed_game(&perturbed(&g1, cfg.perturb), &e1)?,
                &embed_game(&perturbed(&g2, cfg.perturb), &e2)?,
                &SuperpositionWeights::from_probability(r),
                UnitarityMode::Strict,
            )?;
            c.require(sigma.unitarity_deviation() <= UNITARY_TOL, "non-unitary superposition");
            let tau = stationary_closed_form(&mix(&g1, &g2, r).coins)?;
            let out = sigma.apply(&initial_state(&tau.raw), UnitarityMode::Strict)?;
            c.deviation((out.measure().gain() - classical).abs());
        }
        Ok(())
    })
}

fn second(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("second quantization reproduces mixed gain", PROPERNESS_TOL, |c| {
        let (e1, e2) = (Embedding::type1(), Embedding::type2());
        for _ in 0..cfg.trials {
            let g1 = random_game(rng, "B'");
            let g2 = random_game(rng, "B''");
            let r = rng.random::<f64>();
            let classical = classify(&mix(&g1, &g2, MixWeight::new(r)?).coins, 0.0)?.p_gain;
            let q1 = perturbed(&g1, cfg.perturb);
            let q2 = perturbed(&g2, cfg.perturb);
            let direct = run_second_quantization(&q1, &q2, r, &e1)?.p_gain;
            let sup = run_superposed(&g1, &g2, r, &e1, &e2)?.p_gain;
            c.deviation((direct - classical).abs());
            c.deviation((direct - sup).abs());
        }
        Ok(())
    })
}

fn special(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("even A'B' superposition reproduces mixed gain", PROPERNESS_TOL, |c| {
        let e = Embedding::type1();
        for _ in 0..cfg.trials {
            let p = rng.random_range(0.01..0.99);
            let b = random_game(rng, "B'");
            let a = lift_history_free(p)?;
            let classical = classify(&mix(&a, &b, MixWeight::new(0.5)?).coins, 0.0)?.p_gain;
            c.deviation((run_special_ab(p, &b, &e)?.p_gain - classical).abs());
        }
        Ok(())
    })
}

fn canonical() -> CheckOutcome {
    timed("canonical example shows the effect", CANONICAL_TOL, |c| {
        let (a, b) = canonical_example(0.005)?;
        let ra = classify(&a.coins, DEFAULT_FAIRNESS_TOL)?;
        let rb = classify(&b.coins, DEFAULT_FAIRNESS_TOL)?;
        let rm = classify(&mix(&a, &b, MixWeight::new(0.5)?).coins, DEFAULT_FAIRNESS_TOL)?;
        c.deviation((ra.p_gain - 0.495).abs());
        c.deviation((rb.p_gain - 0.49447).abs());
        c.deviation((rm.p_gain - 0.50093).abs());
        c.require(ra.class == Outcome::Losing, "A' not losing");
        c.require(rb.class == Outcome::Losing, "B' not losing");
        c.require(rm.class == Outcome::Winning, "mix not winning");
        let (_, b0) = canonical_unbiased();
        let r0 = classify(&b0.coins, DEFAULT_FAIRNESS_TOL)?;
        c.require((r0.p_gain - 0.5).abs() <= 1e-12, "unbiased B' not fair");
        Ok(())
    })
}

fn fna() -> CheckOutcome {
    timed("FNA protocols are not proper", PROPERNESS_TOL, |c| {
        let e = Embedding::type1();
        let (_, b) = canonical_example(0.005)?;
        let basic = improperness_gap(&b, FnaInit::Basic000, &e)?;
        let ghz = improperness_gap(&b, FnaInit::MaximallyEntangled, &e)?;
        c.require(basic >= 0.19, format!("|000> gap {basic} < 0.19"));
        c.require(ghz >= 0.09, format!("entangled gap {ghz} < 0.09"));
        let fair = lift_history_free(0.5)?;
        for init in [FnaInit::Basic000, FnaInit::MaximallyEntangled] {
            c.deviation(improperness_gap(&fair, init, &e)?);
        }
        Ok(())
    })
}

fn stationary(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("closed-form stationary state matches solver", SOLVER_TOL, |c| {
        for _ in 0..cfg.trials {
            let coins = random_coins(rng);
            let t = transition_matrix(&coins);
            let closed = stationary_closed_form(&coins)?.distribution();
            let solved = stationary_solve(&t)?;
            for j in 0..4 {
                c.deviation((closed.get(j) - solved.get(j)).abs());
            }
            let image = t.apply(closed.weights());
            let residual = (0..4).map(|j| (image[j] - closed.get(j)).abs()).fold(0.0, f64::max);
            c.require(residual <= FIXED_POINT_TOL, format!("fixed-point residual {residual:e}"));
        }
        Ok(())
    })
}

fn identity(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("ratio form equals 1/(2 + x/y)", PROPERNESS_TOL, |c| {
        for _ in 0..cfg.trials {
            let coins = random_coins(rng);
            let [p1, p2, p3, p4] = coins.as_array();
            let ratio = p4 * (p3 + 1.0 - p1) / ((1.0 - p1) * (2.0 * p4 + 1.0 - p2) + p3 * p4);
            let report = classify(&coins, 0.0)?;
            c.deviation((report.p_gain - ratio).abs());
            let weighted = gain_probability(&coins, &stationary_closed_form(&coins)?.raw);
            c.deviation((weighted - ratio).abs());
        }
        Ok(())
    })
}

fn eta_invariance(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("gain probability does not depend on eta", PROPERNESS_TOL, |c| {
        let games = cfg.trials.div_ceil(10).max(1);
        for _ in 0..games {
            let g1 = random_game(rng, "B'");
            let g2 = random_game(rng, "B''");
            let r = rng.random::<f64>();
            let p = rng.random_range(0.01..0.99);
            let mut seen: Vec<[f64; 6]> = Vec::new();
            for k in 0..6 {
                let e1 = Embedding::with_root(EmbeddingKind::Type1, k)?;
                let e2 = Embedding::with_root(EmbeddingKind::Type2, k)?;
                seen.push([
                    run_proper(&g1, &e1)?.p_gain,
                    run_proper(&g1, &e2)?.p_gain,
                    run_superposed(&g1, &g2, r, &e1, &e2)?.p_gain,
                    run_second_quantization(&g1, &g2, r, &e1)?.p_gain,
                    run_special_ab(p, &g1, &e1)?.p_gain,
                    run_fna(&g1, FnaInit::MaximallyEntangled, &e1)?.p_gain,
                ]);
            }
            for row in &seen[1..] {
                for (x, y) in row.iter().zip(&seen[0]) {
                    c.deviation((x - y).abs());
                }
            }
        }
        Ok(())
    })
}

fn restriction(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> CheckOutcome {
    timed("superposition restricts to each game", PROPERNESS_TOL, |c| {
        let (e1, e2) = (Embedding::type1(), Embedding::type2());
        for _ in 0..cfg.trials.div_ceil(10).max(1) {
            let g1 = random_game(rng, "B'");
            let g2 = random_game(rng, "B''");
            let first = run_superposed(&g1, &g2, 1.0, &e1, &e2)?.p_gain;
            let second = run_superposed(&g1, &g2, 0.0, &e1, &e2)?.p_gain;
            c.deviation((first - run_proper(&g1, &e1)?.p_gain).abs());
            c.deviation((second - run_proper(&g2, &e2)?.p_gain).abs());
        }
        Ok(())
    })
}

fn monte_carlo(cfg: &VerifyConfig) -> CheckOutcome {
    timed("Monte Carlo agrees with analytic gain", MONTE_CARLO_TOL, |c| {
        let (a, b) = canonical_example(0.005)?;
        let half = MixWeight::new(0.5)?;
        let sim = |stream: u64| SimConfig::new(cfg.monte_carlo_steps, split_seed(cfg.seed, stream));

        let runs = [
            (simulate(&a, &sim(0))?, &a),
            (simulate(&b, &sim(1))?, &b),
            (simulate_mixed(&a, &b, half, &sim(2))?, &mix(&a, &b, half)),
        ];
        for (stats, game) in &runs {
            let analytic = classify(&game.coins, 0.0)?.p_gain;
            c.deviation((stats.empirical_p_gain - analytic).abs());
        }
        let again = simulate(&b, &sim(1))?;
        c.require(again == runs[1].0, "simulation is not reproducible");
        Ok(())
    })
}

/// Runs every check, in a fixed order.
pub fn run_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    vec![
        proper(cfg, &mut rng),
        superposed(cfg, &mut rng),
        second(cfg, &mut rng),
        special(cfg, &mut rng),
        canonical(),
        fna(),
        stationary(cfg, &mut rng),
        identity(cfg, &mut rng),
        eta_invariance(cfg, &mut rng),
        restriction(cfg, &mut rng),
        monte_carlo(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            trials: 50,
            monte_carlo_steps: 1_000_000,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn suite_passes() {
        for outcome in run_suite(&small()) {
            assert!(outcome.passed, "{}: worst {:e} ({})", outcome.name, outcome.worst, outcome.detail);
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let cfg = VerifyConfig {
            perturb: 1e-6,
            ..small()
        };
        let outcomes = run_suite(&cfg);
        assert!(!outcomes[0].passed);
        assert!(!outcomes[1].passed);
        assert!(!outcomes[2].passed);
        assert!(outcomes[6].passed);
    }
}
