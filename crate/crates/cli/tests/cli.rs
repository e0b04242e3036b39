use std::path::Path;
use std::process::{Command, Output};

use parrondo_cli::output::read_csv;

fn parrondo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parrondo"))
        .args(args)
        .env_remove("PARRONDO_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn analyze_fair_game() {
    let o = parrondo(&["analyze", "--coins", "0.5,0.5,0.5,0.5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("fair, p_gain=0.5\n"));
}

#[test]
fn analyze_canonical_b() {
    let o = parrondo(&["analyze", "--canonical", "--eps", "0.005", "--which", "b"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("losing, p_gain="));
    assert!((value(&text, "losing, p_gain=") - 0.49447).abs() < 1e-4);
    assert!(text.contains("x=0.011 "));
}

#[test]
fn analyze_pair_reports_effect() {
    let o = parrondo(&["analyze", "--canonical", "--eps", "0.005", "--r", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("parrondo effect: yes"));
}

#[test]
fn analyze_pair_without_r_is_usage_error() {
    let o = parrondo(&["analyze", "--coins", "1,1,1,1", "--coins2", "0.5,0.5,0.5,0.5"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn degenerate_chain_exits_2() {
    let o = parrondo(&["analyze", "--coins", "1,0.5,0.5,0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn bad_arguments_exit_64() {
    assert_eq!(code(&parrondo(&["analyze", "--coins", "0.5,1.5,0.5,0.5"])), 64);
    assert_eq!(code(&parrondo(&["analyze", "--canonical", "--eps", "0.01"])), 64);
    assert_eq!(code(&parrondo(&["quantize", "--coins", "0.5,0.5,0.5,0.5", "--eta", "6"])), 64);
    assert_eq!(code(&parrondo(&["frobnicate"])), 64);
    assert_eq!(code(&parrondo(&[])), 64);
}

#[test]
fn help_and_version_exit_0() {
    let o = parrondo(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("compare-fna"));
    assert_eq!(code(&parrondo(&["--version"])), 0);
}

#[test]
fn quantize_proper_is_exact() {
    let o = parrondo(&["quantize", "--canonical", "--eps", "0.005", "--protocol", "proper"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(value(&text, "delta=") <= 1e-12);
    assert_eq!(text.lines().filter(|l| l.starts_with("  |")).count(), 16);
}

#[test]
fn superposed_with_r_one_matches_proper() {
    let coins = ["--coins", "0.3,0.6,0.2,0.8", "--coins2", "0.7,0.1,0.5,0.4"];
    let sup = parrondo(&[&["quantize", "--protocol", "superposed", "--r", "1.0"][..], &coins].concat());
    let proper = parrondo(&["quantize", "--protocol", "proper", "--coins", "0.3,0.6,0.2,0.8"]);
    assert_eq!(code(&sup), 0);
    let strip = |t: String| t.lines().skip(1).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(strip(stdout(&sup)), strip(stdout(&proper)));
}

#[test]
fn fna_ghz_reports_not_proper() {
    let o = parrondo(&["quantize", "--protocol", "fna", "--init", "ghz", "--canonical", "--eps", "0.005"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("NOT PROPER"));
    assert!((value(&text, "p_gain=") - 0.4).abs() <= 1e-12);
}

#[test]
fn compare_fna_gaps() {
    let o = parrondo(&["compare-fna", "--canonical", "--eps", "0.005"]);
    assert_eq!(code(&o), 0);
    let gaps: Vec<f64> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("fna "))
        .map(|l| l.rsplit("gap=").next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 2);
    assert!(gaps[0] >= 0.19 && gaps[1] >= 0.09);
}

#[test]
fn other_protocols_run() {
    for protocol in ["second", "special"] {
        let o = parrondo(&["quantize", "--canonical", "--eps", "0.003", "--r", "0.5", "--protocol", protocol]);
        assert_eq!(code(&o), 0, "{protocol}");
        assert!(value(&stdout(&o), "delta=") <= 1e-12);
    }
}

#[test]
fn simulate_is_deterministic_and_close() {
    let args = ["simulate", "--canonical", "--eps", "0.005", "--r", "0.5", "--steps", "1000000", "--seed", "42"];
    let first = parrondo(&args);
    let second = parrondo(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let p = value(&stdout(&first), "empirical p_gain=");
    assert!((p - 0.50093).abs() <= 0.0016);
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_parrondo"));
        cmd.args(["simulate", "--coins", "0.5,0.5,0.5,0.5", "--steps", "1000"]);
        match seed {
            Some(s) => cmd.env("PARRONDO_SEED", s),
            None => cmd.env_remove("PARRONDO_SEED"),
        };
        stdout(&cmd.output().unwrap())
    };
    assert!(run(Some("7")).contains("seed=7 "));
    assert!(run(None).contains("seed=42 "));
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let svg = dir.path().join("map.svg");
    let o = parrondo(&[
        "sweep", "--canonical", "--eps", "0.001:0.005:5", "--r", "0:1:11",
        "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(), "--quantum-check",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 55);
    for row in &rows {
        assert!(row.qgap.unwrap() <= 1e-10);
        if row.r == 0.0 || row.r == 1.0 {
            assert!(!row.effect);
        }
        if row.r == 0.5 {
            assert!(row.effect);
        }
    }
    let map = std::fs::read_to_string(&svg).unwrap();
    assert!(map.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert_eq!(map.matches("<rect").count(), 55);
}

#[test]
fn sweep_to_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let args = ["sweep", "--canonical", "--eps", "0.002:0.004:3", "--r", "0:1:5"];
    let piped = parrondo(&args);
    parrondo(&[&args[..], &["--out", csv.to_str().unwrap()]].concat());
    assert_eq!(stdout(&piped), std::fs::read_to_string(&csv).unwrap());
}

#[test]
fn unwritable_output_exits_73() {
    let o = parrondo(&["sweep", "--canonical", "--eps", "0.001:0.005:2", "--r", "0:1:2", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(code(&o), 73);
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let ok = parrondo(&["verify", "--trials", "200"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert_eq!(stdout(&ok).matches("[PASS]").count(), 11);

    let bad = parrondo(&["verify", "--trials", "50", "--perturb", "1e-6", "--mc-steps", "1000"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("[FAIL] proper protocol"));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("worst deviation"));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    write(&conf, "command = analyze\ncanonical = true\neps = 0.005\nwhich = a\n");
    let from_file = parrondo(&["--config", conf.to_str().unwrap()]);
    assert_eq!(code(&from_file), 0);
    assert!(stdout(&from_file).starts_with("losing, p_gain=0.495\n"));

    let overridden = parrondo(&["analyze", "--config", conf.to_str().unwrap(), "--which", "b"]);
    assert!(stdout(&overridden).starts_with("losing, p_gain=0.494475138122\n"));

    assert_eq!(code(&parrondo(&["analyze", "--config", "/nonexistent.conf"])), 73);
}
