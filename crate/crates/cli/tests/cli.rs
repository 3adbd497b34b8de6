use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerlocale")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn classify_b2() {
    let out = run(&["frame", "classify", &fixture("b2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({"regular": true, "zero_dimensional": true, "compact": true}));
}

#[test]
fn cyclic_order_is_an_input_error() {
    let out = run(&["frame", "validate", &fixture("cycle.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a poset"));
}

#[test]
fn malformed_json_reports_its_line() {
    let dir = std::env::temp_dir().join(format!("powerlocale-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\n  \"elements\": [\"0\",\n}").unwrap();
    let out = run(&["frame", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn show_c3_as_dot() {
    let out = run(&["frame", "show", &fixture("c3.json"), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("arrowhead=none").count(), 2);
    assert!(text.starts_with("digraph"));
}

#[test]
fn lift_powerset_of_one_pair() {
    let out = run(&["lift", "P", &fixture("r.json"), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["pairs"], serde_json::json!([["∅", "∅"], ["{x}", "{u}"]]));
    assert_eq!(j["oracle"]["agrees"], true);
}

#[test]
fn lift_identity_returns_the_relation() {
    let j = json(&run(&["lift", "Id", &fixture("order2.json")]));
    assert_eq!(j["pairs"], serde_json::json!([["0", "0"], ["0", "1"], ["1", "1"]]));
}

#[test]
fn lift_multiset_prints_a_coupling() {
    let j = json(&run(&["lift", "M", &fixture("mset.json")]));
    assert_eq!(j["queries"][0]["related"], true);
    assert!(j["queries"][0]["witness"].is_object());
    assert_eq!(j["queries"][1]["related"], false);
}

#[test]
fn identity_powerlocale_of_c3() {
    let out = run(&["powerlocale", "Id", &fixture("c3.json"), "--audit", "carioca"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["isomorphic_to_base"], true);
    assert_eq!(j["passed"], true);
}

#[test]
fn vietoris_compare_on_two_uses_the_oracle() {
    let out = run(&["powerlocale", "P", &fixture("two.json"), "--audit", "vietoris-compare"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let checks = j["reports"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["detail"] == "oracle-verified"));
    assert!(checks.iter().any(|c| c["name"] == "V L ≅ V_P L" && c["status"] == "pass"));
}

#[test]
fn oversized_powerlocale_exits_with_the_cap_code() {
    let out = run(&["powerlocale", "P∘P", &fixture("b2.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("estimated size"));
}

#[test]
fn vietoris_command_on_builtin_frames() {
    let j = json(&run(&["vietoris", "two"]));
    assert_eq!(j["oracle_elements"], 4);
    assert_eq!(j["passed"], true);
    let j = json(&run(&["vietoris", "c3"]));
    assert_eq!(j["oracle_elements"], Value::Null);
    assert_eq!(j["passed"], true);
}

#[test]
fn srd_with_oracle() {
    let gamma = r#"[{"set":[{"atom":0}]},{"set":[{"atom":0},{"atom":1}]}]"#;
    let out = run(&["srd", "P", gamma, "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["oracle_agrees"], true);
    assert_eq!(j["srd"], serde_json::json!(["{{0,1}}", "{{0},{0,1}}"]));
}

#[test]
fn functor_syntax_error_is_an_input_error() {
    assert_eq!(run(&["functor", "P*("]).status.code(), Some(2));
}

#[test]
fn shape_mismatch_is_an_input_error() {
    assert_eq!(run(&["base", "Id*Id", r#"{"atom":0}"#]).status.code(), Some(2));
}

#[test]
fn sequential_and_parallel_reports_match() {
    let a = run(&["powerlocale", "P", "b2", "--audit", "all"]);
    let b = run(&["powerlocale", "P", "b2", "--audit", "all", "--sequential"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
