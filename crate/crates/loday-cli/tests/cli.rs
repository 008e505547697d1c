//! End-to-end tests of the batch interface: exit codes, suite selection,
//! report formats, byte-determinism across worker counts, and diagnostics.

use std::path::PathBuf;
use std::process::{Command, Output};

fn samples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn loday(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loday"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_all_on_a_passing_file_exits_zero() {
    let input = samples().join("truncfree2.alg");
    let out = loday(&["verify", "--input", input.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("a-infinity: PASS"));
    assert!(text.contains("subcomplex: PASS"));
    assert!(text.contains("gauge: PASS"));
    assert!(text.contains("status: PASS"));
}

#[test]
fn single_suite_selection_works() {
    let input = samples().join("truncfree2.alg");
    let out = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--suite",
        "a-infinity",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("a-infinity: PASS"));
    assert!(!text.contains("gauge:"));
}

#[test]
fn json_report_has_the_frozen_fields() {
    let input = samples().join("truncfree2.alg");
    let out = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--suite",
        "a-infinity",
        "--report",
        "json-like",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(parsed["status"], "pass");
    assert_eq!(parsed["kind"], "truncated-free");
    let suite = &parsed["suites"][0];
    assert_eq!(suite["suite"], "a-infinity");
    assert_eq!(suite["status"], "pass");
    assert!(suite["checks"].as_u64().unwrap() > 0);
    assert!(suite["witnesses"].as_array().unwrap().is_empty());
    for key in ["max_arity", "max_word_len", "t_order"] {
        assert!(suite["cutoffs"][key].is_u64());
    }
}

#[test]
fn corrupted_content_exits_one_with_witness() {
    let text = std::fs::read_to_string(samples().join("loday2.alg")).unwrap();
    let corrupted = text.replace("d0 xy = 1 yy", "d0 xy = -1 yy");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupt.alg");
    std::fs::write(&path, corrupted).unwrap();
    let out = loday(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Leibniz"), "{err}");
    assert!(err.contains("lhs"), "diagnostic carries the witness: {err}");
}

#[test]
fn malformed_text_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    std::fs::write(&path, "not a section\n").unwrap();
    let out = loday(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // an empty file is a syntax error too
    std::fs::write(&path, "").unwrap();
    let out = loday(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inapplicable_explicit_suite_is_a_usage_error() {
    let input = samples().join("loday2.alg");
    let out = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--suite",
        "gauge",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn skew_reduction_suite_passes_on_an_abelian_instance() {
    // all brackets vanish, so every derived operation of arity >= 2 is
    // zero, the skew precondition holds vacuously and both relation forms
    // are identically zero
    let text = "\
[options]
kind = loday
max-arity = 3
max-word-len = 3
t-order = 1

[generators]
u 0
v 1
w 2

[deformation]
d0 u = 1 v
d1 u = 1 v
";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("abelian.alg");
    std::fs::write(&path, text).unwrap();
    let out = loday(&[
        "verify",
        "--input",
        path.to_str().unwrap(),
        "--suite",
        "linfty",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("linfty: PASS"));
}

#[test]
fn failing_relation_exits_one_with_witness_in_report() {
    // a deformation whose order-1 square-zero sum fails: d1 is not a
    // compatible partner for d0 on this instance
    let text = "\
[options]
kind = truncated-free
max-weight = 3
max-arity = 3
max-word-len = 3

[generators]
g1 0
g2 1

[deformation]
d0 g1 = 1 g2
d1 = inner 1 g1\u{b7}g2
";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("violates.alg");
    std::fs::write(&path, text).unwrap();
    let out = loday(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("square-zero"), "{err}");
}

#[test]
fn jobs_flag_gives_identical_bytes() {
    let input = samples().join("truncfree2.alg");
    let one = loday(&["verify", "--input", input.to_str().unwrap(), "--jobs", "1"]);
    let four = loday(&["verify", "--input", input.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(one.status.code(), four.status.code());
    assert_eq!(one.stdout, four.stdout);
    let one_json = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--jobs",
        "1",
        "--report",
        "json-like",
    ]);
    let four_json = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--jobs",
        "4",
        "--report",
        "json-like",
    ]);
    assert_eq!(one_json.stdout, four_json.stdout);
}

#[test]
fn oversized_cutoffs_are_a_usage_error() {
    let input = samples().join("loday2.alg");
    let out = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--max-word-len",
        "12",
        "--max-arity",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configured bound"));
}

#[test]
fn parse_emits_a_reparsable_canonical_form() {
    let input = samples().join("comloday2.alg");
    let out = loday(&["parse", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let canonical = stdout(&out);
    assert!(canonical.contains("[options]"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("canonical.alg");
    std::fs::write(&path, &canonical).unwrap();
    let again = loday(&["parse", "--input", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again), canonical, "canonical form is a fixed point");
}

#[test]
fn cutoff_flags_override_file_options() {
    let input = samples().join("truncfree2.alg");
    let out = loday(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--suite",
        "a-infinity",
        "--max-arity",
        "2",
        "--max-word-len",
        "2",
        "--report",
        "json-like",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["cutoffs"]["max_arity"], 2);
    assert_eq!(parsed["cutoffs"]["max_word_len"], 2);
}
