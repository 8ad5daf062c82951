//! Black-box tests of the `pwforms` binary: exit codes, witnesses, and
//! byte-determinism of the reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .unwrap()
        .to_path_buf()
}

fn fixture(name: &str) -> String {
    format!("crates/core/tests/fixtures/{name}")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwforms"))
        .args(args)
        .current_dir(repo_root())
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn cohomology_report_is_correct_and_deterministic() {
    let args = [
        "cohomology",
        "-k",
        &fixture("s1.json"),
        "-g",
        &fixture("aff1.json"),
        "--max-degree",
        "2",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["stabilized"], serde_json::json!(true));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "report is not byte-deterministic");
}

#[test]
fn check_accepts_compatible_and_rejects_incompatible() {
    let ok = run(&[
        "check",
        &fixture("hat_v1_s1.json"),
        "-k",
        &fixture("s1.json"),
        "-g",
        &fixture("trivial.json"),
    ]);
    assert_eq!(ok.status.code(), Some(0));

    let bad = run(&[
        "check",
        &fixture("incompatible_form_s1.json"),
        "-k",
        &fixture("s1.json"),
        "-g",
        &fixture("trivial.json"),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(report["ok"], serde_json::json!(false));
    assert!(report["witness"]["simplex"].is_array());
}

#[test]
fn malformed_input_exits_2() {
    let out = run(&[
        "check",
        &fixture("s1.json"), // a complex file where a form is expected
        "-k",
        &fixture("s1.json"),
        "-g",
        &fixture("trivial.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn partition_certifies_covers_and_reports_gaps() {
    let ok = run(&[
        "partition",
        "-k",
        &fixture("s1.json"),
        "--cover",
        &fixture("vertex_stars_s1.json"),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(report["ok"], serde_json::json!(true));
    assert_eq!(report["sum_is_one"], serde_json::json!(true));

    let gap = run(&[
        "partition",
        "-k",
        &fixture("s1.json"),
        "--cover",
        &fixture("edge_stars_s1.json"),
    ]);
    assert_eq!(gap.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&gap)).unwrap();
    assert_eq!(report["ok"], serde_json::json!(false));
}

#[test]
fn glue_reassembles_hat_sections() {
    let out = run(&[
        "glue",
        "-k",
        &fixture("s1.json"),
        "-g",
        &fixture("trivial.json"),
        "--cover",
        &fixture("vertex_stars_s1.json"),
        "--sections",
        &fixture("sections_hat_v1_s1.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let glued: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let expected: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(repo_root().join(fixture("hat_v1_s1.json"))).unwrap(),
    )
    .unwrap();
    assert_eq!(glued["terms"], expected["terms"]);
}

#[test]
fn laws_suite_passes_and_is_seed_deterministic() {
    let args = [
        "laws",
        "-k",
        &fixture("s1.json"),
        "-g",
        &fixture("aff1.json"),
        "--seed",
        "7",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}
