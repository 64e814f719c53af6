//! End-to-end tests of the binary: exit-code contract, output formats, and
//! determinism of sampling runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_subdense")
}

fn write_model(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const STABLE_HALF: &str = r#"{"family":"stable","alpha":0.5}"#;
const GAMMA: &str = r#"{"family":"gamma"}"#;

#[test]
fn density_stable_half_emits_exact_row() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", STABLE_HALF);
    let out = run(&[
        "density",
        "--model",
        model.to_str().unwrap(),
        "--t",
        "1",
        "--x",
        "1",
        "--method",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,x,value,method,w,saddle_mass,exponent,ratio,flag"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    // Closed form: (1/(2√π))·e^{−1/4} = 0.21969564473…
    let value: f64 = row[2].parse().unwrap();
    assert!((value - 0.219_695_644_733_861_1).abs() < 1e-10, "value {value}");
    let ratio: f64 = row[7].parse().unwrap();
    assert!((ratio - 1.0).abs() < 1e-6, "ratio {ratio}");
}

#[test]
fn saddle_method_is_gated_for_gamma_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", GAMMA);
    let out = run(&[
        "density",
        "--model",
        model.to_str().unwrap(),
        "--t",
        "1",
        "--x",
        "1",
        "--method",
        "saddle",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("WLSC"),
        "stderr should name the failed scaling hypothesis: {}",
        stderr(&out)
    );
    // The pure contour method stays available for the same model.
    let out = run(&[
        "density",
        "--model",
        model.to_str().unwrap(),
        "--t",
        "1",
        "--x",
        "1",
        "--method",
        "bromwich",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn malformed_specs_and_invocations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // Syntactically broken JSON.
    let broken = write_model(dir.path(), "broken.json", r#"{"family":"stable","#);
    let out = run(&["audit", "--model", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    // Unknown field.
    let unknown = write_model(
        dir.path(),
        "unknown.json",
        r#"{"family":"stable","alpha":0.5,"beta":1}"#,
    );
    let out = run(&["audit", "--model", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    // Out-of-range parameter (well-formed JSON, invalid model).
    let invalid = write_model(dir.path(), "invalid.json", r#"{"family":"stable","alpha":1.5}"#);
    let out = run(&["audit", "--model", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    // Missing required argument (clap usage error).
    let out = run(&["density", "--t", "1", "--x", "1"]);
    assert_eq!(out.status.code(), Some(3));
    // Mutually exclusive point arguments.
    let m = write_model(dir.path(), "m.json", STABLE_HALF);
    let out = run(&[
        "density",
        "--model",
        m.to_str().unwrap(),
        "--t",
        "1",
        "--x",
        "1",
        "--x-grid",
        "1:2:3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // --help is a successful outcome.
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn ks_analytic_is_a_capability_error_off_half_stable() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", GAMMA);
    let out = run(&[
        "sample",
        "--model",
        model.to_str().unwrap(),
        "--t",
        "1",
        "--n",
        "100",
        "--eps",
        "1e-4",
        "--ks-analytic",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn sampling_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", STABLE_HALF);
    let sample_args = |out_path: &Path| {
        vec![
            "sample".to_string(),
            "--model".into(),
            model.to_str().unwrap().into(),
            "--t".into(),
            "1".into(),
            "--n".into(),
            "3000".into(),
            "--eps".into(),
            "1e-4".into(),
            "--seed".into(),
            "7".into(),
            "--format".into(),
            "bin".into(),
            "--out".into(),
            out_path.to_str().unwrap().into(),
            "--summary".into(),
            out_path.with_extension("json").to_str().unwrap().into(),
        ]
    };
    let a = dir.path().join("a.bin");
    let b = dir.path().join("b.bin");
    let out = Command::new(bin())
        .args(sample_args(&a))
        .env("SUBDENSE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let out = Command::new(bin())
        .args(sample_args(&b))
        .env("SUBDENSE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a.len(), 8 * 3000);
    assert_eq!(bytes_a, bytes_b, "identical RunConfig + seed must reproduce bytes");
    assert_eq!(
        std::fs::read(a.with_extension("json")).unwrap(),
        std::fs::read(b.with_extension("json")).unwrap()
    );
}

#[test]
fn verify_passes_for_stable_half_and_fails_cleanly_on_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "m.json", STABLE_HALF);
    let out = run(&["verify", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    // Unreadable model file counts as a malformed invocation.
    let out = run(&["verify", "--model", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn degenerate_drift_model_verifies_as_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "d.json", r#"{"family":"drift","b":2.0}"#);
    let out = run(&["verify", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("degenerate"));
}
