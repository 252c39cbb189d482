use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {stdout:?}"));
    (v, out.status.code().unwrap())
}

#[test]
fn braid_sign_of_inverse_sigma2() {
    assert_eq!(json_of(&["braid", "sign", "B"]), (json!({ "sign": "positive" }), 0));
    assert_eq!(json_of(&["braid", "sign", "b"]).0["sign"], "negative");
    assert_eq!(json_of(&["braid", "sign", "a b a B A B"]).0["sign"], "trivial");
    // the γ-conjugate ordering signs w by γ⁻¹ w γ
    let conjugated = json_of(&["braid", "sign", "B", "--conjugator", "a"]).0;
    assert_eq!(conjugated["sign"], json_of(&["braid", "sign", "A B a"]).0["sign"]);
    assert_eq!(conjugated["conjugator"], "a");
}

#[test]
fn braid_compare_reduce_floor() {
    assert_eq!(json_of(&["braid", "compare", "b", "a"]).0, json!({ "order": "less" }));
    assert_eq!(json_of(&["braid", "reduce", "a b a B A B"]).0, json!({ "reduced": "", "trivial": true }));
    assert_eq!(json_of(&["braid", "floor", "a b a a b a"]).0, json!({ "floor": 1 }));
    assert_eq!(json_of(&["braid", "floor", "B"]).0, json!({ "floor": 0 }));
    assert_eq!(json_of(&["braid", "floor", "b"]).0, json!({ "floor": -1 }));
}

#[test]
fn abelianize_bundled_presentation() {
    let (v, code) = json_of(&["group", "abelianize", &data("trefoil_klein_pi1.json")]);
    assert_eq!(v, json!({ "free_rank": 0, "torsion": [4] }));
    assert_eq!(code, 0);
}

#[test]
fn cover_order_of_trivial_polynomial() {
    assert_eq!(json_of(&["cover", "order", "--poly", "1", "--n", "7"]), (json!({ "order": 1 }), 0));
    let (v, _) = json_of(&["cover", "order", "--poly", "t - 1 + t^-1", "--n", "6"]);
    assert_eq!(v["order"], "infinite");
    assert_eq!(v["determinant"], 3);
    assert!(v["note"].is_string());
    let (v, _) = json_of(&["cover", "order", "--poly", "-t + 3 - t^-1", "--n", "2"]);
    assert_eq!(v["order"], 5);
}

#[test]
fn klein_commands() {
    let (v, _) = json_of(&["klein", "fill", "--m", "1", "--n", "0"]);
    assert_eq!(v["class"], "infinite_cyclic_quotient_lo");
    let (v, _) = json_of(&["klein", "fill", "--m", "0", "--n", "1"]);
    assert_eq!(v["class"], "free_product_of_finite_not_lo");
    assert_eq!(json_of(&["klein", "sign", "y", "--ordering", "O2"]).0["sign"], "negative");
    assert_eq!(json_of(&["klein", "sign", "y", "--ordering", "O1", "--conjugator", "x"]).0["sign"], "negative");
}

#[test]
fn slope_commands() {
    assert_eq!(json_of(&["slope", "delta", "1/2", "-3/1"]).0, json!({ "delta": 7 }));
    let (v, _) = json_of(&["slope", "glue", "--matrix", "0,1,1,0", "-1/1"]);
    assert_eq!(v["image"], "-1/1");
    assert_eq!(v["union_homology_order"], 1);
}

#[test]
fn splice_certificate_round_trip() {
    let tree = data("double_trefoil.json");
    let out = run(&["splice", "cert", &tree]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["status"], "LO");

    let dir = std::env::temp_dir().join(format!("orderable-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let (report, code) = json_of(&["splice", "verify", &tree, path.to_str().unwrap()]);
    assert_eq!((report["valid"].clone(), code), (json!(true), 0));

    let tampered = String::from_utf8(out.stdout).unwrap().replace("\"-1/1\"", "\"1/1\"");
    std::fs::write(&path, tampered).unwrap();
    let (report, code) = json_of(&["splice", "verify", &tree, path.to_str().unwrap()]);
    assert_eq!((report["valid"].clone(), code), (json!(false), 1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hf_rank_example() {
    let (v, _) = json_of(&["hf", "rank", "--p", "-3", "--q", "1", "--nu", "1", "--ranks", "1"]);
    assert_eq!(v, json!({ "rank": 5, "h1_order": 3, "l_space": false }));
}

#[test]
fn verify_commands() {
    let (v, code) = json_of(&["verify", "compatibility", "--samples", "40", "--seed", "9"]);
    assert_eq!((v["passed"].clone(), code), (json!(true), 0));
    assert!(v["wrong_ordering_control"]["failures"].as_u64().unwrap() >= 1);
    let (alias, _) = json_of(&["verify", "proposition-4-3", "--samples", "40", "--seed", "9"]);
    assert_eq!(alias, v);
    let (v, _) = json_of(&["verify", "nonapplicability"]);
    assert_eq!(v["slope_rule_applicable"], false);
    assert_eq!(v["pulled_back_slope"], "1/0");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["verify", "compatibility", "--samples", "30", "--seed", "123"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    assert_ne!(run(&args).stdout, run(&["verify", "compatibility", "--samples", "30", "--seed", "124"]).stdout);
}

#[test]
fn envelope_wraps_payload() {
    let (v, _) = json_of(&["--envelope", "braid", "sign", "B"]);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"], json!({ "sign": "positive" }));
    assert!(v["citations"].as_array().is_some_and(|c| !c.is_empty()));
    assert!(v["runtime_ms"].is_number());
}

#[test]
fn exit_codes() {
    let (v, code) = json_of(&["group", "enumerate", &data("b3.json"), "--subgroup", "s2", "--max-cosets", "5"]);
    assert_eq!((v["result"].clone(), code), (json!("inconclusive"), 2));
    let (v, code) = json_of(&["group", "enumerate", &data("b3.json"), "--subgroup", "s1", "--subgroup", "s2"]);
    assert_eq!((v["index"].clone(), code), (json!(1), 0));
    assert_eq!(run(&["braid", "sign", "q"]).status.code(), Some(1));
    assert_eq!(run(&["braid", "sign"]).status.code(), Some(1));
    assert_eq!(run(&["cover", "order", "--poly", "t^2 + 1", "--n", "3"]).status.code(), Some(1));
    let err = String::from_utf8(run(&["hf", "rank", "--q", "2"]).stderr).unwrap();
    assert!(err.contains("--p"), "{err}");
}

#[test]
fn text_format() {
    let out = run(&["--format", "text", "group", "abelianize", &data("klein.json")]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "Z + Z/2");
}

#[test]
fn payloads_round_trip() {
    let cmds: [&[&str]; 4] = [
        &["verify", "nonapplicability"],
        &["klein", "fill", "--m", "3", "--n", "2"],
        &["group", "fill", &data("b3.json"), "--mu", "s2", "--lambda", "s1 s2 s1 s1 s2 s1 S2 S2 S2 S2 S2 S2", "--slope", "1/0"],
        &["splice", "cert", &data("three_piece.json")],
    ];
    for args in cmds {
        let (v, _) = json_of(args);
        let again: Value = serde_json::from_str(&v.to_string()).unwrap();
        assert_eq!(again, v);
    }
    let (v, _) = json_of(cmds[1]);
    let filling: orderable::klein::KleinFilling = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&filling).unwrap(), v);
    let (v, _) = json_of(cmds[3]);
    let cert: orderable::seifert::Certificate = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&cert).unwrap(), v);
}
