use std::path::PathBuf;

use ocreach_cli::{run, EXIT_INPUT, EXIT_LIMIT, EXIT_OK};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn call(args: &[&str]) -> (i32, String) {
    run(std::iter::once("ocreach").chain(args.iter().copied()))
}

fn call_json(args: &[&str]) -> Value {
    let (code, out) = call(args);
    assert_eq!(code, EXIT_OK, "{out}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("ocreach-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn decide_subset_sum_gadget_under_vass() {
    let v = call_json(&["decide", &data("subset-sum-3-5-7-12.json"), &data("target-zero.json"), "--semantics", "vass", "--verify"]);
    assert_eq!(v["answer"], Value::Bool(true));
    assert_eq!(v["verification"]["agrees"], Value::Bool(true));
    assert!(v["witness"].is_array());
}

#[test]
fn classify_s5_integer_is_np_hard() {
    let v = call_json(&["classify", &data("target-s5.json"), "--semantics", "int"]);
    assert_eq!(v["side"], "np-hard");
    let v = call_json(&["classify", "catalog:S3", "--semantics", "int"]);
    assert_eq!(v["side"], "tractable");
}

#[test]
fn covertable_of_a_single_negative_edge() {
    let (code, out) = call(&["covertable", &data("minus-three.json"), "--from", "0", "--to", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, r#"[["3","0"]]"#);
}

#[test]
fn decide_reports_method_and_answer() {
    let v = call_json(&["decide", &data("effects-2-7.json"), "catalog:S3", "-s", "int", "--params", "5"]);
    assert_eq!(v["answer"], Value::Bool(true));
    assert_eq!(v["method"], "fast");
    // S2 holds the even integers, so the effect 2 is enough.
    let v = call_json(&["decide", &data("effects-2-7.json"), "catalog:S2", "-s", "int"]);
    assert_eq!(v["answer"], Value::Bool(true));
    assert_eq!(v["method"], "exact-fallback");
}

#[test]
fn gadget_round_trip_through_files() {
    let out = scratch("gadget.json", "");
    let v = call_json(&["gadget", "catalog:S5", "-s", "int", "--items", "3,5,7", "--target-sum", "12", "--out", &out]);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(v["sidecar"].as_str().unwrap()).unwrap()).unwrap();
    assert_eq!(sidecar["dp_verdict"], Value::Bool(true));
    let t: Vec<String> = sidecar["t"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    let d = call_json(&["decide", &out, "catalog:S5", "-s", "int", "--params", &t.join(",")]);
    assert_eq!(d["answer"], Value::Bool(true));

    let inline = call_json(&["gadget", "catalog:S5", "-s", "int", "--items", "3,5,7", "--target-sum", "4"]);
    assert_eq!(inline["sidecar"]["dp_verdict"], Value::Bool(false));
    assert!(inline["automaton"]["transitions"].is_array());
}

#[test]
fn oracle_reports_bounded_answers() {
    let v = call_json(&["oracle", &data("loop-plus-one.json"), "catalog:interval", "-s", "nat", "--params", "4"]);
    assert_eq!(v["result"], "reachable");
    assert_eq!(v["value"], "4");
    let v = call_json(&[
        "oracle",
        &data("loop-plus-one.json"),
        "catalog:interval",
        "-s",
        "nat",
        "--params",
        "40",
        "--length-bound",
        "10",
    ]);
    assert_eq!(v["result"], "not-reachable-within-bounds");
}

#[test]
fn bench_prints_csv() {
    let (code, out) = call(&["bench", "--states", "5,10", "--trials", "2", "--seed", "7"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "states,trial,fast_ms,exact_ms,exact_entries,guard_hit");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("5,0,"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(call(&["decide", "/nonexistent.json", "catalog:S3", "-s", "int"]).0, EXIT_INPUT);
    assert_eq!(call(&["classify", "catalog:S3", "-s", "bogus"]).0, EXIT_INPUT);
    assert_eq!(call(&["classify", "catalog:nothing", "-s", "int"]).0, EXIT_INPUT);
    let broken = scratch("broken.json", "{\"states\": 2,");
    let (code, out) = call(&["covertable", &broken, "--from", "0", "--to", "1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("line"), "{out}");
    let stride0 = scratch(
        "stride0.json",
        r#"{"p": 0, "branches": [{"base": [], "periods": [], "slots": [{"left": "-inf", "right": "+inf"}], "stride": [0, 0]}]}"#,
    );
    assert_eq!(call(&["classify", &stride0, "-s", "int"]).0, EXIT_INPUT);
    let nonmono = scratch(
        "nonmono.json",
        r#"{"p": 1, "branches": [{"base": ["0"], "periods": [["1"]], "slots": [{"left": {"const": "0", "coeffs": ["1"]}, "right": {"const": "0", "coeffs": ["-1"]}}], "stride": [1, 0]}]}"#,
    );
    let (code, out) = call(&["classify", &nonmono, "-s", "int"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("monotone representation required"), "{out}");
}

#[test]
fn cyclic_covertable_exits_with_three() {
    let (code, out) = call(&["covertable", &data("loop-plus-one.json"), "--from", "0", "--to", "1"]);
    assert_eq!(code, EXIT_LIMIT, "{out}");
}

#[test]
fn size_guard_exits_with_three() {
    let (code, out) = call(&["decide", &data("effects-2-7.json"), "catalog:S2", "-s", "int", "--exact-guard", "0"]);
    assert_eq!(code, EXIT_LIMIT, "{out}");
}

#[test]
fn reports_are_deterministic() {
    let args = ["decide", &data("effects-2-7.json"), "catalog:S4", "-s", "int", "--params", "1,2", "--verify"];
    assert_eq!(call(&args), call(&args));
}

#[test]
fn catalog_listing_covers_every_example() {
    let v = call_json(&["catalog"]);
    assert_eq!(v.as_array().unwrap().len(), ocreach::targets::catalog::all().len());
}
