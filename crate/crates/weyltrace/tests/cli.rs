//! End-to-end tests of the `weyltrace` binary: exit codes, report shape,
//! deterministic output, and the CSV side-car.
//!
//! Exit code contract: 0 = every check passed, 1 = a check ran and failed
//! its criterion, 2 = usage, configuration, or numerical setup error.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyltrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(subcommand: &str, cfg: &str, extra: &[&str]) -> Output {
    let model = config(cfg);
    let mut args = vec![subcommand, "--model", model.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn report(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

/// Fresh output path inside the target directory (kept per-test unique so
/// parallel tests never collide).
fn out_path(test: &str, ext: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).expect("tmp dir");
    dir.join(format!("{test}.{ext}"))
}

#[test]
fn green_passes_on_a_sound_model() {
    let output = run_on("green", "micro.cfg", &[]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let doc = report(&output);
    assert_eq!(doc["pass"], Value::Bool(true));
    assert_eq!(doc["manifest"]["tool"], "weyltrace");
    assert_eq!(doc["manifest"]["command"], "green");
    assert_eq!(doc["manifest"]["seed"], 7);
    assert_eq!(doc["results"][0]["check"], "green");
    assert_eq!(doc["results"][0]["pass"], Value::Bool(true));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("weyltrace: pass"), "stderr: {stderr}");
}

#[test]
fn green_fails_on_the_corrupted_model() {
    let output = run_on("green", "faulty_green.cfg", &[]);
    assert_eq!(exit_code(&output), 1);
    let doc = report(&output);
    assert_eq!(doc["pass"], Value::Bool(false));
    assert_eq!(doc["manifest"]["gamma1_scale"], 1.5);
    let residual = doc["results"][0]["max_residual"].as_f64().unwrap();
    let tol = doc["results"][0]["tol"].as_f64().unwrap();
    assert!(residual > tol, "residual {residual:e} should exceed tol {tol:e}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("weyltrace: FAIL"), "stderr: {stderr}");
}

#[test]
fn trace_handles_multiple_and_complex_spectral_points() {
    let output = run_on(
        "trace",
        "micro.cfg",
        &["--pair", "rd", "--m", "2", "--lambda", "-1", "--lambda", "-5,2"],
    );
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let doc = report(&output);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for record in results {
        assert_eq!(record["check"], "trace");
        assert_eq!(record["pair"], "RD");
        assert_eq!(record["m"], 2);
        assert_eq!(record["pass"], Value::Bool(true));
    }
    assert_eq!(doc["manifest"]["lambda"][1][0], -5.0);
    assert_eq!(doc["manifest"]["lambda"][1][1], 2.0);
}

#[test]
fn krein_rejects_composite_pairs() {
    let output = run_on("krein", "micro.cfg", &["--pair", "rr"]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("primitive formulas"), "stderr: {stderr}");
}

#[test]
fn krein_reports_both_robin_middle_forms() {
    let output = run_on("krein", "micro.cfg", &["--pair", "rn", "--lambda", "-2"]);
    assert_eq!(exit_code(&output), 0);
    let doc = report(&output);
    let forms: Vec<&str> = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["form"].as_str().unwrap())
        .collect();
    assert_eq!(forms, ["(I - B M)^-1 B", "B (I - M B)^-1"]);
}

#[test]
fn usage_errors_exit_with_two() {
    // Zero samples is a setup error, not a failed check.
    assert_eq!(exit_code(&run_on("green", "micro.cfg", &["--samples", "0"])), 2);
    // A ladder needs at least two levels to fit anything.
    assert_eq!(
        exit_code(&run_on("decay", "disk_ladder.cfg", &["--levels", "1"])),
        2
    );
    // Decay rebuilds the model per level and refuses fault-injection scales.
    assert_eq!(exit_code(&run_on("decay", "faulty_green.cfg", &[])), 2);
    // Decay ladders run on mode-resolved geometries only.
    let output = run_on("decay", "sl1d_n200.cfg", &[]);
    assert_eq!(exit_code(&output), 2);
    assert!(
        String::from_utf8_lossy(&output.stderr).contains("mode-resolved"),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    // Exactly one spectral point per decay run.
    assert_eq!(
        exit_code(&run_on(
            "decay",
            "disk_ladder.cfg",
            &["--lambda", "-1", "--lambda", "-2"],
        )),
        2
    );
    // Missing config file.
    assert_eq!(exit_code(&run(&["green", "--model", "configs/nope.cfg"])), 2);
    // Unknown flag is a clap usage error.
    assert_eq!(exit_code(&run_on("green", "micro.cfg", &["--bogus"])), 2);
}

#[test]
fn malformed_configs_exit_with_two_and_name_the_problem() {
    // Syntax errors carry the line number.
    let path = out_path("malformed-syntax", "cfg");
    std::fs::write(&path, "[geometry]\nkind = sl1d\nn 32\n").unwrap();
    let output = run(&["green", "--model", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");

    // Value errors name the key and the offending value.
    let path = out_path("malformed-value", "cfg");
    std::fs::write(&path, "[geometry]\nkind = sl1d\nn = not_a_number\n").unwrap();
    let output = run(&["green", "--model", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("`n`") && stderr.contains("not_a_number"),
        "stderr: {stderr}"
    );
}

#[test]
fn resonant_boundary_operator_is_a_setup_error() {
    // beta = 2 makes B gamma1 - gamma0 rank-deficient on the two-cell
    // interval, so the Robin restriction does not exist; the CLI must
    // report a setup error (2), not a failed check (1).
    let path = out_path("resonant", "cfg");
    std::fs::write(
        &path,
        "[geometry]\nkind = sl1d\nn = 2\nlength = 1.0\n\
         [boundary_op]\nvariant = multiplication\nbeta = 2.0\n",
    )
    .unwrap();
    let output = run(&[
        "trace",
        "--model",
        path.to_str().unwrap(),
        "--pair",
        "rn",
        "--lambda",
        "-1",
    ]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("degenerate kernel"), "stderr: {stderr}");
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(exit_code(&run(&["--help"])), 0);
    assert_eq!(exit_code(&run(&["--version"])), 0);
    assert_eq!(exit_code(&run(&["trace", "--help"])), 0);
}

#[test]
fn reports_are_byte_identical_across_reruns() {
    let path = out_path("rerun", "json");
    let model = config("micro.cfg");
    let args = [
        "trace",
        "--model",
        model.to_str().unwrap(),
        "--pair",
        "rr",
        "--lambda",
        "-1",
        "--out",
        path.to_str().unwrap(),
        "--seed",
        "42",
    ];
    assert_eq!(exit_code(&run(&args)), 0);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(exit_code(&run(&args)), 0);
    let second = std::fs::read(&path).unwrap();
    assert_eq!(first, second, "same inputs and seed must reproduce the report");
    assert!(!first.is_empty());
}

#[test]
fn decay_writes_the_csv_side_car() {
    let path = out_path("decay", "json");
    let output = run_on(
        "decay",
        "disk_ladder.cfg",
        &[
            "--pair",
            "rr",
            "--lambda",
            "-1",
            "--out",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let doc: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["pass"], Value::Bool(true));
    assert_eq!(doc["results"][0]["check"], "decay");
    assert_eq!(doc["results"][0]["pair"], "RR");
    assert_eq!(doc["results"][0]["applicable"], Value::Bool(true));
    // Smoothing B1 - B2 of weak-Schatten exponent 1 lifts the m = 1
    // prediction from 3 to 4.
    assert_eq!(doc["results"][0]["predicted_exponent"], 4.0);

    let csv_path = path.with_extension("csv");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,s_k,level"));
    assert!(lines.next().unwrap().starts_with("1,"), "first data row is rank 1");

    let outputs: Vec<&str> = doc["manifest"]["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(outputs.contains(&path.to_str().unwrap()));
    assert!(outputs.contains(&csv_path.to_str().unwrap()));
}

#[test]
fn all_covers_every_check_the_config_supports() {
    let output = run_on("all", "micro.cfg", &[]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let doc = report(&output);
    assert_eq!(doc["pass"], Value::Bool(true));
    let results = doc["results"].as_array().unwrap();

    let count = |kind: &str| results.iter().filter(|r| r["check"] == kind).count();
    // Green once; Krein: one DN form plus two RN middle forms; traces over
    // all four pairs (micro.cfg declares both boundary operators).
    assert_eq!(count("green"), 1);
    assert_eq!(count("krein"), 3);
    assert_eq!(count("trace"), 4);
    // Interval models carry no mode structure, so no decay ladder runs.
    assert_eq!(count("decay"), 0);

    let pairs: Vec<&str> = results
        .iter()
        .filter(|r| r["check"] == "trace")
        .map(|r| r["pair"].as_str().unwrap())
        .collect();
    assert_eq!(pairs, ["DN", "RN", "RD", "RR"]);
}
