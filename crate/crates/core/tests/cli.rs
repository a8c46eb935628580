use std::path::{Path, PathBuf};

use dirdescent::cli::run_cli;
use serde_json::Value;

fn run(args: &[&str], out: &Path) -> i32 {
    let mut argv: Vec<String> = vec!["dirdescent".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.to_string_lossy().into_owned());
    run_cli(argv)
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let code = run(args, &out);
    let text = std::fs::read_to_string(&out).unwrap();
    (code, serde_json::from_str(&text).unwrap())
}

fn run_text(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let code = run(args, &out);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn descend_on_w_reaches_the_minimum() {
    let (code, doc) = run_json(&[
        "descend",
        "--fn",
        "w_piecewise",
        "--x0",
        "0.75",
        "--delta",
        "0.2",
        "--alpha",
        "0.05",
    ]);
    assert_eq!(code, 0);
    assert_eq!(num(&doc["best"]["f"]), 0.0);
    assert_eq!(doc["bound"]["satisfied"], Value::Bool(true));
    assert_eq!(
        doc["version"],
        Value::String(format!("dirdescent {}", env!("CARGO_PKG_VERSION")))
    );
    assert_eq!(doc["config"]["fn"], "w_piecewise");
    assert!((num(&doc["d_star"][0]) + 0.2).abs() < 1e-9);
}

#[test]
fn round_bowl_direction_check_is_clean() {
    let (code, doc) = run_json(&[
        "verify",
        "direction",
        "--fn",
        "sq_radial",
        "--n",
        "2",
        "--x0",
        "1,0",
        "--delta",
        "0.6",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], Value::Bool(true));
    assert_eq!(doc["violation_count"], 0);
}

#[test]
fn anisotropic_bowl_direction_check_finds_a_witness() {
    let (code, doc) = run_json(&[
        "verify",
        "direction",
        "--fn",
        "aniso_quadratic",
        "--kappa",
        "10",
        "--x0",
        "1,1",
        "--delta",
        "0.1",
    ]);
    assert_eq!(code, 1);
    let margin = num(&doc["violations"][0]["margin"]);
    assert!((margin - 0.41023).abs() < 1e-4, "{margin}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run_cli(["dirdescent", "descend", "--no-such-flag"]), 2);
    assert_eq!(run_cli(["dirdescent", "frobnicate"]), 2);
    assert_eq!(run_cli(["dirdescent", "--help"]), 0);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    assert_eq!(run(&["descend", "--fn", "no_such_function"], &out), 2);
    assert_eq!(run(&["descend", "--fn", "abs1d", "--alpha", "-1"], &out), 2);
    assert_eq!(
        run(
            &["verify", "direction", "--fn", "abs1d", "--x0", "0.1,0.2"],
            &out
        ),
        2
    );
    assert!(!out.exists());
}

#[test]
fn lce_table_has_schema_and_embedded_config() {
    let (code, text) = run_text(&["lce", "--fn", "abs1d"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# dirdescent "));
    assert!(lines[1].starts_with("# config: {"));
    assert_eq!(lines[2], "x1,lce,gap,in_Af");
    assert_eq!(lines.len(), 3 + 101);
    // |x| is convex, so every grid point lies on its envelope.
    assert!(lines[3..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn convexity_mask_on_w_excludes_the_middle_bump() {
    let (code, text) = run_text(&["convexity", "--fn", "w_piecewise"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let flag_at = |x: f64| {
        rows.iter()
            .find(|r| (r[0].parse::<f64>().unwrap() - x).abs() < 1e-9)
            .map(|r| r[4] == "true")
            .unwrap()
    };
    assert!(!flag_at(0.0));
    assert!(flag_at(0.5));
    assert!(flag_at(-1.0));
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "fn = \"w_piecewise\"\nx0 = 0.75\ndelta = 0.2\nalpha = 0.1\n",
    )
    .unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let (code, doc) = run_json(&["descend", "--config", &cfg, "--alpha", "0.05"]);
    assert_eq!(code, 0);
    assert_eq!(num(&doc["alpha"]), 0.05);
    assert_eq!(num(&doc["config"]["delta"]), 0.2);

    std::fs::write(dir.path().join("bad.toml"), "no_such_key = 1\n").unwrap();
    let bad = dir.path().join("bad.toml").to_string_lossy().into_owned();
    assert_eq!(
        run(&["descend", "--config", &bad], &dir.path().join("o")),
        2
    );
}

#[test]
fn sample_cloud_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    std::fs::write(&csv, "x1,f\n-1,0.8\n-0.5,0.2\n0,0.5\n0.5,0\n1,0.9\n").unwrap();
    let target = format!("file:{}", csv.display());
    let (code, text) = run_text(&["convexity", "--fn", &target]);
    assert_eq!(code, 0);
    let flags: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(flags, ["true", "true", "false", "true", "true"]);

    let missing = PathBuf::from(dir.path()).join("missing.csv");
    let target = format!("file:{}", missing.display());
    assert_eq!(run(&["lce", "--fn", &target], &dir.path().join("o")), 2);
}

#[test]
fn bench_rows_are_sorted_and_bounded() {
    let (code, text) = run_text(&["bench", "--fn", "norm_radial,abs1d", "--alphas", "0.1,0.05"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2 * 2 * 2);
    assert_eq!(rows[0][0], "abs1d");
    assert!(rows.iter().all(|r| r[9] == "true" && r[11].is_empty()));
    let exact: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "abs1d" && r[1] == "exact_d0")
        .map(|r| r[5].parse().unwrap())
        .collect();
    assert_eq!(exact, [0.1, 0.05]);
}

#[test]
fn every_property_runs_on_w() {
    for p in [
        "monotone",
        "envelope",
        "preservation",
        "restriction",
        "subgradient",
    ] {
        let (code, doc) = run_json(&["verify", p, "--fn", "w_piecewise", "--x0", "0.75"]);
        assert_eq!(code, 0, "{p}");
        assert_eq!(doc["passed"], Value::Bool(true));
    }
    let (code, doc) = run_json(&["verify", "caratheodory", "--count", "100", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["instances"], 100);
}

#[test]
fn plateau_monotone_check_fails_with_witnesses() {
    let (code, doc) = run_json(&["verify", "monotone", "--fn", "plateau_flat", "--x0", "1"]);
    assert_eq!(code, 1);
    assert!(doc["violation_count"].as_u64().unwrap() > 0);
}
