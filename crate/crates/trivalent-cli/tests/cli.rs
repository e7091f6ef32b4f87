//! End-to-end tests of the `trivalent` binary: spec'd example outputs, JSON
//! mode, file-driven verbs, exit codes, and byte-determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn trivalent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trivalent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("trivalent-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file written");
    path
}

#[test]
fn dimension_examples_match() {
    let out = trivalent(&["dim", "arp", "--degree", "1", "--variant", "rp_nl_cl"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "4\n");

    let out = trivalent(&["dim", "chords", "--degree", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "15\n");

    let out = trivalent(&["dim", "chords", "--degree", "2", "--colored"]);
    assert_eq!(stdout_of(&out), "12\n");

    let out = trivalent(&["dim", "aphi", "--degree", "2"]);
    assert_eq!(stdout_of(&out), "2\n");
}

#[test]
fn json_mode_carries_a_schema_version() {
    let out = trivalent(&["--json", "dim", "aphi", "--degree", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "dim.aphi");
    assert_eq!(doc["dimension"], 1);
}

#[test]
fn invariants_match_the_genus_three_table() {
    let out = trivalent(&["invariants", "--space", "u2", "--group", "gl", "--genus", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "4\n");

    let out = trivalent(&["invariants", "--space", "u2", "--group", "sp", "--genus", "3"]);
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn contract_reads_files_and_prints_a_fraction() {
    let diagram = write_temp("diag.json", r#"{"degree": 1, "pairs": [[1, 2]]}"#);
    let tensor = write_temp(
        "tensor.json",
        r#"{"genus": 1, "rank": 2, "entries": [{"idx": ["x1", "y1"], "num": 1, "den": 1}]}"#,
    );
    let out = trivalent(&[
        "contract",
        "--diagram",
        diagram.to_str().unwrap(),
        "--tensor",
        tensor.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1/1\n");
}

#[test]
fn cocycle_evaluates_the_distinguished_pair() {
    let alpha = write_temp(
        "alpha.json",
        r#"{"genus": 3, "rank": 3, "entries": [{"idx": ["x1", "x2", "x3"], "num": 1, "den": 1}]}"#,
    );
    let beta = write_temp(
        "beta.json",
        r#"{"genus": 3, "rank": 3, "entries": [{"idx": ["y1", "y2", "y3"], "num": 1, "den": 1}]}"#,
    );
    let out = trivalent(&[
        "cocycle",
        "c1",
        "--genus",
        "3",
        "--alpha",
        alpha.to_str().unwrap(),
        "--beta",
        beta.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "-1/1\n");

    let out = trivalent(&[
        "--json",
        "cocycle",
        "c1",
        "--genus",
        "3",
        "--alpha",
        alpha.to_str().unwrap(),
        "--beta",
        beta.to_str().unwrap(),
        "--swapped",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["theta_coefficient"], "0/1");
    assert_eq!(doc["swapped"], true);
}

#[test]
fn magnus_expands_expressions() {
    let out = trivalent(&["magnus", "--expr", "(1 - g1)*(1 - g2)", "--trunc", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "X1 X2\n");

    let out = trivalent(&["--json", "magnus", "--expr", "comm(g1,g2)", "--trunc", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["truncation"], 2);
    let terms = doc["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3); // 1 + X1·X2 − X2·X1
}

#[test]
fn labeling_classifies_and_certifies() {
    let diagram = write_temp("crossing.json", r#"{"degree": 2, "pairs": [[1, 3], [2, 4]]}"#);
    let out = trivalent(&[
        "labeling",
        "--diagram",
        diagram.to_str().unwrap(),
        "--order",
        "a1 a2 b1 b2 c1 c2",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("all proper: true"));
    assert!(text.contains("gamma: unchanged"));

    let out = trivalent(&[
        "labeling",
        "--diagram",
        diagram.to_str().unwrap(),
        "--commutator",
        "auto",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("proper monomials: 1"));
    assert!(text.contains("certificate: ok"));

    // A wrong bracket word is a verification failure: exit 1.
    let out = trivalent(&[
        "labeling",
        "--diagram",
        diagram.to_str().unwrap(),
        "--commutator",
        "[[[[[a1,a2],b1],b2],c1],c2]",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selfcheck_suites_pass_and_misuse_exits_two() {
    let out = trivalent(&["selfcheck", "--suite", "criterion_3"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).starts_with("PASS criterion_3"));

    // Identical invocations produce byte-identical stdout.
    let again = trivalent(&["selfcheck", "--suite", "criterion_3"]);
    assert_eq!(out.stdout, again.stdout);

    let out = trivalent(&["selfcheck", "--suite", "no_such_suite"]);
    assert_eq!(out.status.code(), Some(2));

    let out = trivalent(&["dim", "aphi"]);
    assert_eq!(out.status.code(), Some(2));

    let out = trivalent(&["dim", "arp", "--degree", "1", "--variant", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
