//! End-to-end tests of the command-line binary: JSON in, JSON out, exit
//! codes 0 (pass), 1 (audit found a counterexample), 2 (bad input).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pants-measure"))
        .args(args)
        .output()
        .expect("the binary should spawn")
}

fn stdout_json(output: &Output) -> Value {
    assert!(output.stderr.is_empty(), "unexpected stderr: {}", text(&output.stderr));
    serde_json::from_slice(&output.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", text(&output.stdout)))
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("the binary should exit, not be signalled")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

/// Fixture directory holding the theta graph cut along every curve.
fn fixtures() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "graph.json",
        r#"{
            "genus": 2,
            "vertices": [0, 1],
            "edges": [
                {"id": "A", "ends": [0, 1]},
                {"id": "B", "ends": [1, 0]},
                {"id": "C", "ends": [0, 1]}
            ]
        }"#,
    );
    let scene = write(
        dir.path(),
        "scene.json",
        r#"{
            "graphRef": "graph.json",
            "stacks": {"A": 1, "B": 1, "C": 1}
        }"#,
    );
    (dir, scene)
}

#[test]
fn graph_new_prints_a_canonical_graph() {
    let output = run(&["graph-new", "--genus", "2"]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["genus"], json!(2));
    assert_eq!(value["vertices"], json!([0, 1]));
    assert_eq!(value["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn graph_new_rejects_genus_below_two() {
    let output = run(&["graph-new", "--genus", "1"]);
    assert_eq!(exit_code(&output), 2);
    assert!(text(&output.stderr).starts_with("error:"), "{}", text(&output.stderr));
}

#[test]
fn scene_validate_reports_regions_and_curves() {
    let (_dir, scene) = fixtures();
    let output = run(&["scene-validate", scene.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["genus"], json!(2));
    assert_eq!(value["regions"], json!(["surface:0", "surface:1"]));
    assert_eq!(value["curves"], json!(["A.1", "B.1", "C.1"]));
}

#[test]
fn normalize_reduces_a_decorated_pants_to_its_class() {
    let (dir, _scene) = fixtures();
    let sub = write(dir.path(), "sub.json", r#"{"sceneRef": "scene.json", "in": ["surface:0"]}"#);
    let output = run(&["normalize", sub.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(text(&output.stdout).trim(), r#"{"class":{"members":[0]}}"#);
}

#[test]
fn eval_prints_the_exact_value_and_a_decimal_rendering() {
    let (dir, _scene) = fixtures();
    let sub = write(dir.path(), "sub.json", r#"{"sceneRef": "scene.json", "in": ["surface:0"]}"#);
    let output = run(&["eval", sub.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["class"], json!({"members": [0]}));
    assert_eq!(value["value"], json!("1/2"));
    assert_eq!(value["decimal"], json!("0.500000"));
}

#[test]
fn eval_accepts_a_weighted_function_file() {
    let (dir, _scene) = fixtures();
    let sub = write(dir.path(), "sub.json", r#"{"sceneRef": "scene.json", "in": ["surface:0"]}"#);
    let nu = write(
        dir.path(),
        "nu.json",
        r#"{
            "weighted": {
                "a": {"0": "1/3", "1": "1/3"},
                "b": {"A": "1/3"},
                "w": {"A": "1/4"},
                "c": {"A": "first"}
            }
        }"#,
    );
    let output =
        run(&["eval", "--nu", nu.to_str().unwrap(), sub.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_json(&output)["value"], json!("7/12"));
}

#[test]
fn zeta_integrates_the_worked_two_step_filtration() {
    let (dir, _scene) = fixtures();
    let filtration = write(
        dir.path(),
        "filtration.json",
        r#"{
            "sceneRef": "scene.json",
            "tMin": "0",
            "tMax": "1",
            "steps": [
                {"t": "3/10", "in": ["surface:0"]},
                {"t": "7/10", "in": ["surface:0", "surface:1"]}
            ]
        }"#,
    );
    let output = run(&["zeta", filtration.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["zeta"], json!("1/2"));
    assert_eq!(value["decimal"], json!("0.500000"));
    assert!(value.get("warnings").is_none());
}

#[test]
fn zeta_warns_when_the_filtration_never_covers_the_surface() {
    let (dir, _scene) = fixtures();
    let filtration = write(
        dir.path(),
        "stuck.json",
        r#"{
            "sceneRef": "scene.json",
            "tMin": "0",
            "tMax": "1",
            "steps": [{"t": "1/2", "in": ["surface:0"]}]
        }"#,
    );
    let output = run(&["zeta", filtration.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["zeta"], json!("3/4"));
    assert_eq!(value["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn audit_passes_a_lawful_function_on_a_bare_graph() {
    let (dir, _scene) = fixtures();
    let output = run(&["audit", dir.path().join("graph.json").to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["status"], json!("pass"));
    assert_eq!(value["function"]["status"], json!("pass"));
    assert_eq!(value["normalization"]["status"], json!("pass"));
    assert_eq!(value["measure"]["status"], json!("pass"));
}

#[test]
fn audit_rejects_a_non_additive_table_with_a_witness_pair() {
    let (dir, _scene) = fixtures();
    let nu = write(
        dir.path(),
        "broken.json",
        r#"{"table": {"0": "9/10", "1": "9/10", "0,1": "1"}}"#,
    );
    let output = run(&[
        "audit",
        "--nu",
        nu.to_str().unwrap(),
        dir.path().join("graph.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 1);
    let value = stdout_json(&output);
    assert_eq!(value["status"], json!("fail"));
    assert_eq!(value["function"]["status"], json!("fail"));
    let counterexample = &value["function"]["counterexample"];
    assert!(counterexample.is_object(), "expected a witness, got {counterexample}");
    assert!(counterexample["second"].is_array(), "additive law witnesses come in pairs");
}

#[test]
fn enumerate_lists_the_canonical_selections() {
    let (_dir, scene) = fixtures();
    let output = run(&["enumerate", scene.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let value = stdout_json(&output);
    assert_eq!(value["selections"], json!(4));
    let canonical = value["canonical"].as_array().unwrap();
    assert_eq!(canonical.len(), 2);
    assert_eq!(canonical[0]["in"], json!(["surface:0"]));
    assert_eq!(canonical[0]["class"], json!({"members": [0]}));
}

#[test]
fn unreadable_files_exit_with_code_two() {
    let output = run(&["normalize", "/nonexistent/sub.json"]);
    assert_eq!(exit_code(&output), 2);
    assert!(text(&output.stderr).starts_with("error:"), "{}", text(&output.stderr));
}

#[test]
fn malformed_json_exits_with_code_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"genus\": 2,");
    let output = run(&["audit", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
    let stderr = text(&output.stderr);
    assert!(stderr.starts_with("error:"), "{stderr}");
    assert!(stderr.contains("line"), "parse errors should carry a location: {stderr}");
}

#[test]
fn unknown_region_ids_exit_with_code_two() {
    let (dir, _scene) = fixtures();
    let sub = write(dir.path(), "sub.json", r#"{"sceneRef": "scene.json", "in": ["bogus"]}"#);
    let output = run(&["normalize", sub.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
    assert!(text(&output.stderr).starts_with("error:"), "{}", text(&output.stderr));
}

#[test]
fn graph_new_output_feeds_straight_back_into_audit() {
    let dir = TempDir::new().unwrap();
    let generated = run(&["graph-new", "--genus", "3"]);
    assert_eq!(exit_code(&generated), 0);
    let graph = write(dir.path(), "genus3.json", &text(&generated.stdout));
    let output = run(&["audit", graph.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_json(&output)["status"], json!("pass"));
}
