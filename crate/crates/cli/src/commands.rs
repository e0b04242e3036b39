use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use parrondo_core::{
    canonical_example, classify, grid_scan, improperness_gap, lift_history_free, mix,
    extract_region, parrondo_effect, run_fna, run_proper, run_second_quantization, run_special_ab,
    run_suite, run_superposed, simulate, simulate_mixed, stationary_closed_form, CellStatus,
    Embedding, EmbeddingKind, FnaInit, GameReport, GameSpec, GridRange, History,
    MixWeight, ProtocolResult, QuantumCheck, SimConfig, SweepBase, SweepSpec, VerifyConfig,
    DEFAULT_FAIRNESS_TOL,
};

use crate::args::{
    AnalyzeArgs, CompareFnaArgs, EmbeddingArgs, GameArgs, Init, Kind, PairArgs, Protocol,
    QuantizeArgs, QuantumProtocol, SimulateArgs, SweepArgs, VerifyArgs, Which,
};
use crate::error::CliError;
use crate::format::{complex, sig};
use crate::output::{render_svg, write_csv};

type Out<'a> = &'a mut String;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn canonical_eps(g: &GameArgs) -> Result<f64, CliError> {
    g.eps.ok_or_else(|| usage("--canonical needs --eps"))
}

fn single_game(g: &GameArgs) -> Result<GameSpec, CliError> {
    if let Some(c) = &g.coins {
        return Ok(GameSpec::new(c.0, "game"));
    }
    if g.canonical {
        let (a, b) = canonical_example(canonical_eps(g)?)?;
        return Ok(match g.which {
            Which::A => a,
            Which::B => b,
        });
    }
    Err(usage("give --coins P1,P2,P3,P4 or --canonical --eps EPS"))
}

fn game_pair(g: &GameArgs, pair: &PairArgs) -> Result<(GameSpec, GameSpec), CliError> {
    match (&g.coins, &pair.coins2) {
        (Some(c1), Some(c2)) => Ok((
            GameSpec::new(c1.0, "first"),
            GameSpec::new(c2.0, "second"),
        )),
        (None, None) if g.canonical => Ok(canonical_example(canonical_eps(g)?)?),
        (Some(_), None) => Err(usage("two-game commands need --coins2 with --coins")),
        (None, Some(_)) => Err(usage("--coins2 needs --coins for the first game")),
        (None, None) => Err(usage("give --canonical --eps EPS or --coins and --coins2")),
    }
}

fn mix_weight(pair: &PairArgs) -> Result<MixWeight, CliError> {
    let r = pair.r.ok_or_else(|| usage("two-game commands need --r"))?;
    Ok(MixWeight::new(r)?)
}

fn embedding(e: &EmbeddingArgs, kind: Kind) -> Result<Embedding, CliError> {
    let kind = match kind {
        Kind::Type1 => EmbeddingKind::Type1,
        Kind::Type2 => EmbeddingKind::Type2,
    };
    Ok(Embedding::with_root(kind, e.eta as usize)?)
}

fn history_line(label: &str, w: &[f64; 4]) -> String {
    let parts: Vec<String> = History::ALL
        .iter()
        .zip(w)
        .map(|(h, p)| format!("{h}={}", sig(*p)))
        .collect();
    format!("{label}: {}", parts.join(" "))
}

fn write_report(out: Out, g: &GameSpec, r: &GameReport) -> Result<(), CliError> {
    let _ = writeln!(out, "{}, p_gain={}", r.class, sig(r.p_gain));
    let _ = writeln!(out, "game: {}", g.label);
    let _ = writeln!(out, "{}", history_line("coins", &g.coins.as_array()));
    match r.diagnostics {
        Some(d) => {
            let _ = writeln!(out, "x={} y={}", sig(d.x), sig(d.y));
        }
        None => {
            let _ = writeln!(out, "x, y: undefined (y = 0 on the boundary)");
        }
    }
    let stationary = stationary_closed_form(&g.coins)?;
    let _ = writeln!(out, "{}", history_line("stationary", stationary.distribution().weights()));
    Ok(())
}

pub fn analyze(a: &AnalyzeArgs, out: Out) -> Result<(), CliError> {
    if a.pair.coins2.is_some() && a.pair.r.is_none() {
        return Err(usage("--coins2 given without --r: the pair needs a mixing probability"));
    }
    if a.pair.r.is_none() {
        let g = single_game(&a.game)?;
        let report = classify(&g.coins, DEFAULT_FAIRNESS_TOL)?;
        return write_report(out, &g, &report);
    }
    let (g1, g2) = game_pair(&a.game, &a.pair)?;
    let r = mix_weight(&a.pair)?;
    let effect = parrondo_effect(&g1, &g2, r, DEFAULT_FAIRNESS_TOL)?;
    let m = mix(&g1, &g2, r);
    for (g, rep) in [(&g1, &effect.report_1), (&g2, &effect.report_2), (&m, &effect.report_mix)] {
        write_report(out, g, rep)?;
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "parrondo effect: {}",
        if effect.effect { "yes (both games lose, the mix wins)" } else { "no" }
    );
    Ok(())
}

fn write_protocol(out: Out, name: &str, result: &ProtocolResult, classical: f64) {
    let _ = writeln!(out, "protocol: {name}");
    let _ = writeln!(out, "final state:");
    for (k, z) in result.final_state.amplitudes().iter().enumerate() {
        let _ = writeln!(out, "  |{k:03b}> {}", complex(*z));
    }
    let _ = writeln!(out, "distribution:");
    for (k, p) in result.distribution.probabilities().iter().enumerate() {
        let _ = writeln!(out, "  |{k:03b}> {}", sig(*p));
    }
    let _ = writeln!(out, "p_gain={}", sig(result.p_gain));
    let _ = writeln!(out, "classical p_gain={}", sig(classical));
    let _ = writeln!(out, "delta={}", sig((result.p_gain - classical).abs()));
}

const NOT_PROPER: &str = "*** NOT PROPER: fixed initial state ignores the stationary history weights ***";

pub fn quantize(q: &QuantizeArgs, out: Out) -> Result<(), CliError> {
    let (name, result, classical) = match q.protocol {
        Protocol::Proper => {
            let g = single_game(&q.game)?;
            let result = run_proper(&g, &embedding(&q.embedding, q.embedding.embedding)?)?;
            ("proper", result, classify(&g.coins, 0.0)?.p_gain)
        }
        Protocol::Fna => {
            let g = single_game(&q.game)?;
            let init = match q.init {
                Init::Basic000 => FnaInit::Basic000,
                Init::Ghz => FnaInit::MaximallyEntangled,
            };
            let _ = writeln!(out, "{NOT_PROPER}");
            let result = run_fna(&g, init, &embedding(&q.embedding, q.embedding.embedding)?)?;
            ("fna", result, classify(&g.coins, 0.0)?.p_gain)
        }
        Protocol::Superposed | Protocol::Second => {
            let (g1, g2) = game_pair(&q.game, &q.pair)?;
            let r = mix_weight(&q.pair)?;
            let classical = classify(&mix(&g1, &g2, r).coins, 0.0)?.p_gain;
            let e1 = embedding(&q.embedding, Kind::Type1)?;
            if q.protocol == Protocol::Superposed {
                let e2 = embedding(&q.embedding, Kind::Type2)?;
                ("superposed", run_superposed(&g1, &g2, r.value(), &e1, &e2)?, classical)
            } else {
                ("second", run_second_quantization(&g1, &g2, r.value(), &e1)?, classical)
            }
        }
        Protocol::Special => {
            let (p, b) = if q.game.canonical && q.game.coins.is_none() {
                let (a, b) = canonical_example(canonical_eps(&q.game)?)?;
                (q.p.unwrap_or(a.coins.get(0)), b)
            } else {
                let p = q.p.ok_or_else(|| usage("the special protocol needs --p with --coins"))?;
                (p, single_game(&q.game)?)
            };
            let a = lift_history_free(p)?;
            let classical = classify(&mix(&a, &b, MixWeight::new(0.5)?).coins, 0.0)?.p_gain;
            let result = run_special_ab(p, &b, &embedding(&q.embedding, Kind::Type1)?)?;
            ("special", result, classical)
        }
    };
    write_protocol(out, name, &result, classical);
    Ok(())
}

pub fn compare_fna(c: &CompareFnaArgs, out: Out) -> Result<(), CliError> {
    let g = single_game(&c.game)?;
    let e = embedding(&c.embedding, c.embedding.embedding)?;
    let classical = classify(&g.coins, 0.0)?.p_gain;
    let proper = run_proper(&g, &e)?.p_gain;
    let _ = writeln!(out, "game: {}", g.label);
    let _ = writeln!(out, "classical p_gain={}", sig(classical));
    let _ = writeln!(out, "proper    p_gain={} gap={}", sig(proper), sig((proper - classical).abs()));
    let _ = writeln!(out, "{NOT_PROPER}");
    for (name, init) in [("|000>", FnaInit::Basic000), ("(|000>+|111>)/sqrt2", FnaInit::MaximallyEntangled)] {
        let p = run_fna(&g, init, &e)?.p_gain;
        let gap = improperness_gap(&g, init, &e)?;
        let _ = writeln!(out, "fna {name:<20} p_gain={} gap={}", sig(p), sig(gap));
    }
    Ok(())
}

pub fn verify(v: &VerifyArgs, out: Out) -> Result<(), CliError> {
    if !v.perturb.is_finite() {
        return Err(usage("--perturb must be finite"));
    }
    let cfg = VerifyConfig {
        trials: v.trials as usize,
        seed: v.seed,
        perturb: v.perturb,
        monte_carlo_steps: v.mc_steps,
    };
    let outcomes = run_suite(&cfg);
    for c in &outcomes {
        let _ = writeln!(
            out,
            "[{}] {:<46} worst={} tol={} ({:.2?}){}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            sig(c.worst),
            sig(c.tolerance),
            c.elapsed,
            if c.detail.is_empty() { String::new() } else { format!(" {}", c.detail) }
        );
    }
    let failed: Vec<_> = outcomes.iter().filter(|c| !c.passed).collect();
    let _ = writeln!(out, "{} of {} checks passed (seed {}, {} trials)", outcomes.len() - failed.len(), outcomes.len(), v.seed, v.trials);
    match failed.iter().max_by(|a, b| (a.worst / a.tolerance).total_cmp(&(b.worst / b.tolerance))) {
        None => Ok(()),
        Some(worst) => Err(CliError::Verify(format!(
            "{} check(s) failed; worst deviation {} (tolerance {}) in \"{}\"",
            failed.len(),
            sig(worst.worst),
            sig(worst.tolerance),
            worst.name
        ))),
    }
}

pub fn simulate_cmd(s: &SimulateArgs, out: Out) -> Result<(), CliError> {
    let cfg = SimConfig {
        steps: s.steps,
        burn_in: s.burn_in,
        seed: s.seed,
        initial_history: s.initial_history,
    };
    let (stats, game) = if s.pair.r.is_some() || s.pair.coins2.is_some() {
        let (g1, g2) = game_pair(&s.game, &s.pair)?;
        let r = mix_weight(&s.pair)?;
        (simulate_mixed(&g1, &g2, r, &cfg)?, mix(&g1, &g2, r))
    } else {
        let g = single_game(&s.game)?;
        (simulate(&g, &cfg)?, g)
    };
    let report = classify(&game.coins, DEFAULT_FAIRNESS_TOL)?;
    let sigma = stats.binomial_sigma(report.p_gain);
    let delta = stats.empirical_p_gain - report.p_gain;
    let _ = writeln!(out, "game: {}", game.label);
    let _ = writeln!(out, "seed={} steps={} burn_in={} initial_history={}", stats.seed, stats.steps, s.burn_in, s.initial_history);
    let _ = writeln!(out, "gains={} final_capital={}", stats.gains, stats.final_capital);
    let _ = writeln!(out, "empirical p_gain={}", sig(stats.empirical_p_gain));
    let _ = writeln!(out, "analytic p_gain={} ({})", sig(report.p_gain), report.class);
    let _ = writeln!(out, "delta={} sigma={} delta/sigma={}", sig(delta), sig(sigma), sig(if sigma > 0.0 { delta / sigma } else { 0.0 }));
    let _ = writeln!(out, "{}", history_line("occupancy", stats.occupancy.weights()));
    let stationary = stationary_closed_form(&game.coins)?;
    let _ = writeln!(out, "{}", history_line("stationary", stationary.distribution().weights()));
    Ok(())
}

pub fn parse_range(text: &str, flag: &str) -> Result<GridRange, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(usage(format!("{flag} expects LO:HI:N, got {text:?}")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("{flag}: bad number {s:?}")));
    let count = n.trim().parse::<usize>().map_err(|_| usage(format!("{flag}: bad count {n:?}")))?;
    Ok(GridRange::new(num(lo)?, num(hi)?, count)?)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn sweep(s: &SweepArgs, out: Out) -> Result<(), CliError> {
    let base = match (&s.coins, &s.coins2) {
        (Some(c1), Some(c2)) => SweepBase::Explicit {
            first: c1.0,
            second: c2.0,
        },
        (None, None) if s.canonical => SweepBase::Canonical,
        _ => return Err(usage("sweep needs --canonical or both --coins and --coins2")),
    };
    let spec = SweepSpec {
        eps: parse_range(&s.eps, "--eps")?,
        r: parse_range(&s.r, "--r")?,
        base,
        quantum_check: s.quantum_check.then_some(match s.quantum_protocol {
            QuantumProtocol::Second => QuantumCheck::SecondQuantization,
            QuantumProtocol::Superposed => QuantumCheck::Superposed,
        }),
    };
    let cells = grid_scan(&spec)?;

    match &s.out {
        Some(path) => {
            let file = create(path)?;
            write_csv(file, &cells).map_err(|e| io_err(path, e.into()))?;
        }
        None => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &cells).map_err(|e| io_err(Path::new("<stdout>"), e.into()))?;
            out.push_str(&String::from_utf8(buf).expect("csv output is utf-8"));
        }
    }
    if let Some(path) = &s.svg {
        std::fs::write(path, render_svg(&cells)).map_err(|e| io_err(path, e))?;
    }
    if s.out.is_none() {
        return Ok(());
    }

    let degenerate = cells.iter().filter(|c| matches!(c.status, CellStatus::Degenerate(_))).count();
    let _ = writeln!(out, "cells={} effect={} degenerate={}", cells.len(), cells.iter().filter(|c| c.effect).count(), degenerate);
    if let Some(worst) = cells.iter().filter_map(|c| c.quantum_gap).reduce(f64::max) {
        let _ = writeln!(out, "max quantum gap={}", sig(worst));
    }
    for row in extract_region(&cells) {
        let intervals: Vec<String> = row.intervals.iter().map(|(a, b)| format!("[{}, {}]", sig(*a), sig(*b))).collect();
        let _ = writeln!(
            out,
            "eps={}: {}",
            sig(row.eps),
            if intervals.is_empty() { "no effect".to_string() } else { intervals.join(" ") }
        );
    }
    Ok(())
}
