//! End-to-end CLI contract tests: exit codes, report schema, config
//! precedence, and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pqforge"))
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("pqforge-test-{}-{name}", std::process::id()));
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn pqforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn no_args_is_usage_error() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("EXIT CODES"));
}

#[test]
fn unknown_command_and_flags_exit_two() {
    assert_eq!(run(&["transmogrify"]).status.code(), Some(2));
    assert_eq!(
        run(&["entropy", "--dist", "0.5,0.5", "--bogus", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bound", "no-such-bound"]).status.code(), Some(2));
    let o = run(&["bound", "no-such-bound"]);
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("decoherence-floor"), "error lists bound names");
}

#[test]
fn entropy_inline_and_uniform() {
    let o = run(&["entropy", "--dist", "0.5,0.25,0.25", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1.415"));

    let o = run(&["entropy", "--dist", "uniform:16", "--alpha", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4.000"));
}

#[test]
fn entropy_missing_dist_is_usage_error() {
    let o = run(&["entropy", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn entropy_file_parse_error_carries_line_number() {
    let p = tmp_path("dist.txt");
    std::fs::write(&p, "0.5\nnot-a-number\n0.5\n").unwrap();
    let o = run(&["entropy", "--dist", &format!("@{}", p.display())]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains(":2:"), "expected line number in {err}");
    std::fs::remove_file(&p).ok();
}

#[test]
fn entropy_file_input_works() {
    let p = tmp_path("dist-ok.txt");
    std::fs::write(&p, "# header comment\n0.5\n0.25, 0.25\n").unwrap();
    let o = run(&[
        "entropy",
        "--dist",
        &format!("@{}", p.display()),
        "--alpha",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1.415"));
    std::fs::remove_file(&p).ok();
}

#[test]
fn json_report_schema_and_roundtrip() {
    let o = run(&["bound", "collision-cost", "--m", "256", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let raw = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&raw).unwrap();
    for key in ["version", "config", "results", "flags", "anchors"] {
        assert!(v.get(key).is_some(), "missing top-level key {key}");
    }
    // Byte-identical round trip.
    let mut rendered = serde_json::to_string_pretty(&v).unwrap();
    rendered.push('\n');
    assert_eq!(raw, rendered);
    assert!((v["results"]["value"].as_f64().unwrap() - 256.0 / 3.0).abs() < 1e-9);
}

#[test]
fn config_file_is_strict_and_flags_override() {
    let p = tmp_path("config.json");
    std::fs::write(
        &p,
        r#"{"sphincs": {"lambda": 16, "query_budget": 65536.0}}"#,
    )
    .unwrap();
    let o = bin()
        .args([
            "optimize",
            "sphincs",
            "--config",
            p.to_str().unwrap(),
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["sphincs"]["lambda"], 16);
    // Flag beats config.
    let o = bin()
        .args([
            "optimize",
            "sphincs",
            "--config",
            p.to_str().unwrap(),
            "--lambda",
            "24",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["sphincs"]["lambda"], 24);

    let bad = tmp_path("bad-config.json");
    std::fs::write(&bad, r#"{"sphincs": {"lambda": 16, "warp": 9}}"#).unwrap();
    let o = bin()
        .args(["optimize", "sphincs", "--config", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_file(&p).ok();
    std::fs::remove_file(&bad).ok();
}

#[test]
fn config_env_var_fallback() {
    let p = tmp_path("env-config.json");
    std::fs::write(&p, r#"{"sphincs": {"lambda": 32}}"#).unwrap();
    let o = bin()
        .args(["optimize", "sphincs", "--format", "json"])
        .env("PQFORGE_CONFIG", p.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["sphincs"]["lambda"], 32);
    std::fs::remove_file(&p).ok();
}

#[test]
fn optimize_sphincs_records_initial_height() {
    let o = run(&["optimize", "sphincs", "--lambda", "128", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["report"]["initial_h"], 203);
}

#[test]
fn optimize_ntru_exit_codes_by_mode() {
    let o = run(&[
        "optimize",
        "ntru",
        "--lambda",
        "128",
        "--mode",
        "bkz-blocksize",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&[
        "optimize",
        "ntru",
        "--lambda",
        "128",
        "--mode",
        "paper-literal",
        "--format",
        "json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "literal mode exhausts the modulus budget"
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let flags: Vec<String> = v["flags"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    assert!(flags.iter().any(|f| f == "unreachable"));
    assert!(flags.iter().any(|f| f == "increase-lambda"));
    assert!(flags.iter().any(|f| f == "sigma-update-undefined"));
}

#[test]
fn table2_rows_and_flags() {
    let o = run(&["table2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2]["original"], 701.0);
    assert_eq!(rows[2]["optimized"], 634.0);
    // Computed values appear alongside, never replacing, the stored ones.
    assert_eq!(v["results"]["reference_ntru_key_size_kb"], 1.1);
    assert!(
        v["results"]["computed"]["ntru_bkz"]["hq_bits"]
            .as_f64()
            .unwrap()
            > 380.0
    );
}

#[test]
fn verify_writes_deterministic_csv_and_honors_seed() {
    let c1 = tmp_path("sweep1.csv");
    let c2 = tmp_path("sweep2.csv");
    for (path, seed) in [(&c1, "123"), (&c2, "123")] {
        let o = bin()
            .args([
                "verify",
                "--seed",
                seed,
                "--trials",
                "300",
                "--csv",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(&c1).unwrap();
    let b = std::fs::read(&c2).unwrap();
    assert_eq!(a, b, "same seed must give identical CSV bytes");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,empirical_tail,bound_tail,trials,seed\n"));
    // Different seed changes the stream (seed column at minimum).
    let c3 = tmp_path("sweep3.csv");
    let o = bin()
        .args([
            "verify",
            "--seed",
            "124",
            "--trials",
            "300",
            "--csv",
            c3.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(std::fs::read(&c3).unwrap(), b);
    for p in [c1, c2, c3] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn verify_tamper_hook_fails_with_exit_five() {
    let csv = tmp_path("tampered.csv");
    let o = bin()
        .args([
            "verify",
            "--trials",
            "300",
            "--hook-concentration-constant",
            "30",
            "--csv",
            csv.to_str().unwrap(),
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["results"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["pass"] == false));
    std::fs::remove_file(csv).ok();
}

#[test]
fn optimize_output_file_holds_json_with_table_on_stdout() {
    let p = tmp_path("opt-report.json");
    let o = bin()
        .args([
            "optimize",
            "ntru",
            "--lambda",
            "64",
            "--output",
            p.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("ring degree N"), "table on stdout: {text}");
    let raw = std::fs::read_to_string(&p).unwrap();
    let v: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(v["results"]["report"]["outcome"], "achieved");
    std::fs::remove_file(&p).ok();
}

#[test]
fn csv_format_for_entropy_and_table2() {
    let o = run(&[
        "entropy",
        "--dist",
        "uniform:4",
        "--alpha",
        "2,inf",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("order,bits\n"));
    assert!(text.contains("2,2\n"));

    let o = run(&["table2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("scheme,parameter,original,optimized,"));
}

#[test]
fn bad_format_and_duplicate_flags_are_usage_errors() {
    assert_eq!(run(&["table2", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(
        run(&["optimize", "sphincs", "--lambda", "8", "--lambda", "16"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_environment_in_config_is_usage_error() {
    let p = tmp_path("bad-env.json");
    std::fs::write(&p, r#"{"environment": {"tau_g": 1.0, "tau_d": 0.5}}"#).unwrap();
    let o = bin()
        .args(["optimize", "sphincs", "--config", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("decoherence time"), "{err}");
    std::fs::remove_file(&p).ok();
}
