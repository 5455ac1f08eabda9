use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn coxaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxaut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_arg(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn validate_reports_all_true() {
    let out = coxaut(&["validate", &path_arg("path46.cox")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for k in ["even", "large_type", "connected", "nvb"] {
        assert_eq!(v[k], true, "{k}");
    }
}

#[test]
fn validate_flags_odd_label() {
    let out = coxaut(&["validate", &path_arg("odd.cox")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["even"], false);
}

#[test]
fn out_rejects_branching_vertex() {
    let out = coxaut(&["out", &path_arg("star.cox")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex branching"));
}

#[test]
fn verify_share_passes() {
    let out = coxaut(&["verify", &path_arg("share.cox"), "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn verify_free_product_passes() {
    let out = coxaut(&["verify", &path_arg("z2d4.cox"), "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_reports_twist_edges_and_recorded_value() {
    let out = coxaut(&["out", &path_arg("share.cox"), "--assert-paper-formulas"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 8);
    assert_eq!(v["twist_edges"], 1);
    assert_eq!(v["paper_2k_value"], 16);
}

#[test]
fn out_infinite_case_names_witness() {
    let out = coxaut(&["out", &path_arg("pendant.cox")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["finite"], false);
    assert_eq!(v["witness"], "a");
    assert_eq!(v["free_factors"][0]["generators"], serde_json::json!(["b", "c"]));
}

#[test]
fn path_formula_mismatch_exits_3_under_assertion() {
    let plain = coxaut(&["out", &path_arg("path444.cox")]);
    assert_eq!(plain.status.code(), Some(0));
    let asserted = coxaut(&["out", &path_arg("path444.cox"), "--assert-paper-formulas"]);
    assert_eq!(asserted.status.code(), Some(3));
    let v = json(&asserted);
    assert_eq!(v["order"], 16);
    assert_eq!(v["path_formula"], 32);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["analyze", "share.cox"],
        vec!["aut-count", "pendant.cox", "--bound", "2"],
        vec!["verify", "pendant.cox", "--samples", "5"],
        vec!["out", "path444.cox", "--format", "text"],
    ] {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        a[1] = path_arg(args[1]);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        let first = coxaut(&refs);
        let second = coxaut(&refs);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(!first.stdout.is_empty());
    }
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = coxaut(&["apply", &path_arg("pendant.cox"), &path_arg("pendant_aut.json"), "d a b c", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inverse_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let inv = coxaut(&["invert", &path_arg("pendant.cox"), &path_arg("pendant_aut.json")]);
    assert_eq!(inv.status.code(), Some(0));
    let inv_path = dir.path().join("inv.json");
    std::fs::write(&inv_path, serde_json::to_string(&json(&inv)["labeling"]).unwrap()).unwrap();
    let comp = coxaut(&["compose", &path_arg("pendant.cox"), &inv_path.to_string_lossy(), &path_arg("pendant_aut.json")]);
    assert_eq!(comp.status.code(), Some(0));
    let images = &json(&comp)["images"];
    for s in ["a", "b", "c", "d"] {
        assert_eq!(images[s], s);
    }
}

#[test]
fn diagram_part_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inv = coxaut(&["invert", &path_arg("pendant.cox"), &path_arg("pendant_swap.json")]);
    assert_eq!(inv.status.code(), Some(0));
    let images = json(&inv)["images"].clone();
    // Applying the original to each inverse image returns the generator.
    let file = path_arg("pendant_swap.json");
    for s in ["a", "b", "c", "d"] {
        let w = images[s].as_str().unwrap();
        let out = coxaut(&["apply", &path_arg("pendant.cox"), &file, w]);
        assert_eq!(json(&out)["image"], s);
    }
    drop(dir);
}

#[test]
fn triple_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inv = coxaut(&["invert", &path_arg("z2d4.cox"), &path_arg("triple.json")]);
    let p = dir.path().join("t.json");
    std::fs::write(&p, serde_json::to_string(&json(&inv)["triple"]).unwrap()).unwrap();
    let comp = coxaut(&["compose", &path_arg("z2d4.cox"), &p.to_string_lossy(), &path_arg("triple.json")]);
    let images = &json(&comp)["images"];
    for s in ["a", "b", "z"] {
        assert_eq!(images[s], s);
    }
}

#[test]
fn decompose_orders_factors_by_least_vertex() {
    let out = coxaut(&["decompose", &path_arg("z2d4.cox")]);
    let v = json(&out);
    assert_eq!(v["factors"][0]["names"], serde_json::json!(["a", "b"]));
    assert_eq!(v["factors"][1]["names"], serde_json::json!(["z"]));
    assert_eq!(v["out_finite"], true);
}

#[test]
fn missing_file_is_a_validation_failure() {
    let out = coxaut(&["analyze", "/nonexistent/diagram.cox"]);
    assert_eq!(out.status.code(), Some(1));
}
