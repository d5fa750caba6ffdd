use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn ig_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ig-lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn validate_semigroup_file() {
    let f = temp_json(r#"{"size": 2, "table": [[0, 0], [1, 1]], "names": ["a", "b"]}"#);
    let out = ig_lab(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["report"]["structure"]["models"].as_array().unwrap().len(), 1);
}

#[test]
fn non_associative_table_is_an_input_error() {
    let f = temp_json(r#"{"size": 2, "table": [[1, 0], [0, 0]]}"#);
    let out = ig_lab(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("associative"));
}

#[test]
fn malformed_inputs_exit_one() {
    let f = temp_json("{not json");
    assert_eq!(ig_lab(&["validate", f.path().to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ig_lab(&["validate", "corpus:nope"]).status.code(), Some(1));
    assert_eq!(ig_lab(&["--max-word-len", "0", "validate", "corpus:LZ2"]).status.code(), Some(1));
    assert_eq!(ig_lab(&["word-eq", "corpus:T2", "zz", "id"]).status.code(), Some(1));
}

#[test]
fn synthetic_file_round_trip() {
    let spec = ig_core::fixtures::sign().structure.to_spec();
    let f = temp_json(&serde_json::to_string(&spec).unwrap());
    let out = ig_lab(&["schutz", f.path().to_str().unwrap(), "0:0:0:0/1:0:():0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["order"], 2);
    assert_eq!(v["dual"]["order"], 2);
}

#[test]
fn word_equality_on_fixture_and_corpus() {
    let out = ig_lab(&["word-eq", "fixture:sign", "0:0:0:0/1:0:():0", "0:0:1:0/1:0:(12):0"]);
    assert_eq!(json(&out)["equal"], true);
    let out = ig_lab(&["word-eq", "fixture:sign", "0:0:0:0/1:0:():0", "0:0:1:0/1:0:():0"]);
    assert_eq!(json(&out)["equal"], false);
    let out = ig_lab(&["word-eq", "corpus:B2", "e11,e22,e11", "e11"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["equal"], v["oracle"]["status"] == "Equal");
}

#[test]
fn green_and_census() {
    let out = ig_lab(&["--format", "text", "green", "fixture:cyclic", "L", "0:0:0:0/1:0:0:0", "0:0:0:0/1:0:1:0"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "L: fails");
    let v = json(&ig_lab(&["census", "fixture:cyclic", "0:0:0:0/1:0:0:0"]));
    assert_eq!((v["r_classes"].as_u64(), v["d_class_size"].as_u64()), (Some(1), Some(4)));
}

#[test]
fn contact_dot_export() {
    let out = ig_lab(&["contact", "fixture:sign", "--d1", "0", "--d2", "1", "--dot"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("digraph") && s.matches("->").count() == 2, "{s}");
    let out = ig_lab(&["--format", "dot", "models", "fixture:sign"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rectangular_band_degrades_gracefully() {
    let out = ig_lab(&["--max-word-len", "8", "models", "corpus:RB22"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failures"][0]["error"], "GroupNotFiniteWithinCap");
    assert_eq!(v["failures"][0]["partial"]["rows"], 2);
}

#[test]
fn cross_validation_is_byte_identical_under_a_seed() {
    let args = ["--seed", "7", "cross-validate", "corpus:T2", "--samples", "300"];
    let (a, b) = (ig_lab(&args), ig_lab(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["sampled"]["pairs"], 300);
}

#[test]
fn injected_fault_exits_two() {
    let fault = r#"{"kind":"sandwich","model":0,"lambda":0,"i":0,"value":null}"#;
    let out = ig_lab(&["cross-validate", "corpus:B2", "--fault", fault]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["structure_error"].is_string());
}
