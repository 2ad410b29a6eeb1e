//! End-to-end runs of the `slw` binary: exit codes, text and JSON output,
//! environment overrides, and artifacts that re-load.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use slw_core::colorset::ColorSet;
use slw_core::generators::wheel;
use slw_core::instance::Instance;
use slw_core::listcolor::ListAssignment;

fn slw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slw"))
        .args(args)
        .current_dir(dir)
        .env_remove("SLW_JSON")
        .env_remove("SLW_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(out)))
}

fn k4_file(dir: &Path) -> String {
    let emb = wheel(3).unwrap();
    assert_eq!(emb.n(), 4);
    let lists = ListAssignment::uniform(4, ColorSet::range(1, 4));
    std::fs::write(dir.join("k4.txt"), Instance::new(emb, lists).to_text()).unwrap();
    "k4.txt".into()
}

#[test]
fn k4_with_three_colors_is_not_colorable() {
    let dir = tempfile::tempdir().unwrap();
    let f = k4_file(dir.path());
    let out = slw(dir.path(), &["solve", "--instance", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not L-colorable"));

    let out = slw(dir.path(), &["--json", "solve", "--instance", &f, "--count"]);
    assert_eq!(out.status.code(), Some(1));
    let j = json(&out);
    assert_eq!(j["colorable"], false);
    assert_eq!(j["count"], "0");
}

#[test]
fn torus_ladder_is_generated_and_analyzed_as_genus_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = slw(dir.path(), &["gen", "--family", "torus-ladder", "--k", "4", "-o", "tl.txt"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = slw(dir.path(), &["analyze", "--instance", "tl.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("genus = 1"));

    let j = json(&slw(dir.path(), &["--json", "analyze", "--instance", "tl.txt"]));
    assert_eq!(j["genus"], 1);
    assert_eq!(j["edge_width"], 6);
    let out = slw(dir.path(), &["solve", "--instance", "tl.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn planar_instances_are_solved_constructively() {
    let dir = tempfile::tempdir().unwrap();
    let out = slw(dir.path(), &["gen", "--family", "stacked", "--n", "12", "--seed", "7", "-o", "st.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&slw(dir.path(), &["--json", "solve", "--instance", "st.txt"]));
    assert_eq!(j["colorable"], true);
    assert_eq!(j["algorithm"], "thomassen");
    let j = json(&slw(dir.path(), &["--json", "solve", "--instance", "st.txt", "--algorithm", "oracle"]));
    assert_eq!(j["colorable"], true);
    assert_eq!(j["algorithm"], "oracle");
}

#[test]
fn verify_lemma_passes_and_honours_env_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = slw(dir.path(), &["verify-lemma", "--name", "thm5.6", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("thm5.6: PASS (50 instances checked"), "{}", stdout(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_slw"))
        .args(["verify-lemma", "--name", "thm5.7"])
        .current_dir(dir.path())
        .env("SLW_BUDGET", "20")
        .env("SLW_JSON", "true")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["checked"], 20);
    assert_eq!(j["passed"], true);
}

#[test]
fn verify_lemma_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "verify-lemma", "--name", "thm5.9", "--budget", "40", "--seed", "3"];
    assert_eq!(slw(dir.path(), &args).stdout, slw(dir.path(), &args).stdout);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(slw(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(slw(dir.path(), &["verify-lemma", "--name", "thm0.0"]).status.code(), Some(2));
    assert_eq!(slw(dir.path(), &["analyze", "--instance", "missing.txt"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.txt"), "V 2 E 1\nrot 0: 0\nrot 1: 7\n").unwrap();
    let out = slw(dir.path(), &["--json", "solve", "--instance", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn connector_certificate_is_emitted_and_recertified() {
    let dir = tempfile::tempdir().unwrap();
    let j = json(&slw(dir.path(), &["--json", "gen", "--family", "two-face", "--seed", "1", "-o", "tf.txt"]));
    let ids = |key: &str| -> String {
        j[key].as_array().unwrap().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    };
    let (faces, others) = (ids("faces"), ids("others"));
    let mut args = vec!["--json", "connect", "--instance", "tf.txt", "--faces", &faces, "--dot", "g.dot"];
    if !others.is_empty() {
        args.extend(["--others", &others]);
    }
    let out = slw(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = json(&out);
    assert!(!cert["a"].as_array().unwrap().is_empty());
    assert!(cert["stages"].as_array().unwrap().iter().any(|s| s["name"] == "clauses"));
    assert!(std::fs::read_to_string(dir.path().join("g.dot")).unwrap().starts_with("graph G {"));
    std::fs::write(dir.path().join("cert.json"), stdout(&out)).unwrap();

    let out = slw(dir.path(), &["certify", "--instance", "tf.txt", "--certificate", "cert.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // Dropping A to a single colored vertex leaves a blocked neighborhood or an uncolored face.
    let mut forged = cert.clone();
    let v = forged["a"][0].clone();
    let c = forged["phi"]["assignment"].as_array().unwrap().iter().find(|p| p[0] == v).unwrap().clone();
    forged["a"] = serde_json::json!([v]);
    forged["phi"]["assignment"] = serde_json::json!([c]);
    std::fs::write(dir.path().join("forged.json"), forged.to_string()).unwrap();
    let out = slw(dir.path(), &["certify", "--instance", "tf.txt", "--certificate", "forged.json", "--complete"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn certify_rejects_dumps_that_do_not_refute() {
    let dir = tempfile::tempdir().unwrap();
    let f = k4_file(dir.path());
    let body = std::fs::read_to_string(dir.path().join(&f)).unwrap();
    let header = "# slw counterexample\n# statement: thm5.6\n# seed: 0\n# index: 0\n# max-oracle-vertices: 64\n# detail: x\n";
    std::fs::write(dir.path().join("dump.txt"), format!("{header}{body}")).unwrap();
    let out = slw(dir.path(), &["--json", "certify", "--dump", "dump.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["refuted"], false);
    assert_eq!(slw(dir.path(), &["certify", "--dump", &f]).status.code(), Some(2));
}
