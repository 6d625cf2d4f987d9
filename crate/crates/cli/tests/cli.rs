//! End-to-end checks of the command-line surface: determinism, stamped
//! outputs and the documented exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glassbridge"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("GLASSBRIDGE_SEED")
        .output()
        .expect("spawn glassbridge")
}

#[test]
fn meanfield_csv_deterministic_and_stamped() {
    let args = [
        "meanfield",
        "--z",
        "6",
        "--j",
        "1.0",
        "--beta-grid",
        "0.0:0.3:0.05",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "same config + seed must be byte-identical"
    );
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# glassbridge v"));
    assert!(text.contains("# config: meanfield --z 6"));
    assert!(text.contains("# seed: 7"));
    assert!(text.contains("beta,m_star"));
    // below the critical point 1/6 every magnetization is zero
    for line in text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("beta"))
    {
        let cols: Vec<&str> = line.split(',').collect();
        let beta: f64 = cols[0].parse().unwrap();
        let m: f64 = cols[1].parse().unwrap();
        if beta < 1.0 / 6.0 {
            assert_eq!(m, 0.0, "beta = {beta}");
        }
    }
}

#[test]
fn duality_json_reports_threshold() {
    let out = run(&["duality", "--cluster", "0", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let p_c = doc["results"]["p_c"].as_f64().unwrap();
    assert!((p_c - 0.1100).abs() < 1e-4);
    assert_eq!(doc["results"]["s"], 0);
    assert!(doc["results"]["residual_calls"].as_u64().unwrap() > 0);
    // first renormalization level sharpens the estimate
    let out = run(&["duality", "--cluster", "1", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let p_c1 = doc["results"]["p_c"].as_f64().unwrap();
    assert!((p_c1 - 0.1093).abs() < 2e-4);
    assert!(p_c1 < p_c);
}

#[test]
fn anneal_torus_instances_pass() {
    let out = run(&[
        "anneal",
        "--suite",
        "je",
        "--lattice",
        "2x2",
        "--T",
        "0.6",
        "--steps",
        "24",
        "--seed",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&[
        "anneal",
        "--suite",
        "cje",
        "--lattice",
        "2x2",
        "--beta",
        "0.8",
        "--steps",
        "5",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn code_rejects_oversized_lattice_with_code_3() {
    let out = run(&[
        "code",
        "--L",
        "5",
        "--p-grid",
        "0.05:0.05:0.01",
        "--matched",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_flag_is_code_2_and_missing_required_is_4() {
    let out = run(&["duality", "--cluster", "0", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["code", "--p-grid", "0.05:0.05:0.01", "--matched"]);
    assert_eq!(out.status.code(), Some(4), "--L is required");
    let out = run(&["mc", "--L", "4", "--K", "0.4"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "mc without --nishimori is out of contract"
    );
}

#[test]
fn code_csv_runs_and_differs_across_seeds() {
    let base = [
        "code",
        "--L",
        "2",
        "--p-grid",
        "0.1:0.1:0.01",
        "--trials",
        "400",
        "--matched",
    ];
    let mut with_seed_1 = base.to_vec();
    with_seed_1.extend(["--seed", "1"]);
    let mut with_seed_2 = base.to_vec();
    with_seed_2.extend(["--seed", "2"]);
    let a = run(&with_seed_1);
    let b = run(&with_seed_1);
    let c = run(&with_seed_2);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout, "different seeds should resample");
}

#[test]
fn env_seed_overrides_flag() {
    let args = [
        "code",
        "--L",
        "2",
        "--p-grid",
        "0.1:0.1:0.01",
        "--trials",
        "200",
        "--matched",
        "--seed",
        "1",
    ];
    let flag_seed_2: Vec<&str> = args
        .iter()
        .map(|s| if *s == "1" { "2" } else { *s })
        .collect();
    let via_env = bin()
        .args(args)
        .env("GLASSBRIDGE_SEED", "2")
        .output()
        .unwrap();
    let via_flag = run(&flag_seed_2);
    assert_eq!(via_env.stdout, via_flag.stdout);
    let text = String::from_utf8(via_env.stdout).unwrap();
    assert!(text.contains("# seed: 2"));
}

#[test]
fn anneal_je_sudden_quench_exits_clean() {
    let out = run(&[
        "anneal", "--suite", "je", "--N", "3", "--T", "0", "--seed", "5",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for check in doc["results"].as_array().unwrap() {
        assert!(check["pass"].as_bool().unwrap());
        assert!(check["abs_error"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn anneal_gauge_reports_divergent_correlation_identity() {
    // identities (a)-(d) hold; (e) diverges on the 2x2 torus, so the suite
    // honestly exits 1 and reports the zero-configuration count
    let out = run(&[
        "anneal",
        "--suite",
        "gauge",
        "--lattice",
        "2x2",
        "--beta",
        "0.4",
        "--steps",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = doc["results"]["checks"].as_array().unwrap();
    for check in &checks[..4] {
        assert!(check["pass"].as_bool().unwrap(), "{check}");
    }
    assert!(!checks[4]["pass"].as_bool().unwrap());
    assert_eq!(doc["results"]["correlation_zero_configs"], 112);
}

#[test]
fn mc_emits_reference_row() {
    let out = run(&[
        "mc",
        "--L",
        "4",
        "--K",
        "0.5",
        "--nishimori",
        "--disorder",
        "8",
        "--sweeps",
        "400",
        "--seed",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("K,estimate,std_error,exact_reference"));
    let row = text.lines().last().unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols.len(), 4);
    let reference: f64 = cols[3].parse().unwrap();
    assert!((reference - (-0.5f64.tanh())).abs() < 1e-15);
}

#[test]
fn anneal_qja_and_cje_pass() {
    let out = run(&[
        "anneal", "--suite", "qja", "--N", "2", "--beta", "1.0", "--seed", "9",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&[
        "anneal", "--suite", "cje", "--N", "3", "--beta", "0.9", "--steps", "7",
    ]);
    assert!(out.status.success());
}

#[test]
fn output_file_flag_writes_identical_payload() {
    let dir = std::env::temp_dir().join(format!("glassbridge-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let args = ["meanfield", "--beta-grid", "0.0:0.2:0.1", "--seed", "3"];
    let stdout_run = run(&args);
    let file_run = bin()
        .args(args)
        .arg("--output")
        .arg(&path)
        .output()
        .unwrap();
    assert!(file_run.status.success());
    let file_text = std::fs::read(&path).unwrap();
    assert_eq!(stdout_run.stdout, file_text);
    std::fs::remove_dir_all(&dir).ok();
}
