use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn bicrossed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicrossed")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("bicrossed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn every_reproduce_target_succeeds() {
    for id in ["primexem", "doiexemp", "treiexemp", "neunic", "s4-index"] {
        let out = bicrossed(&["reproduce", id]);
        assert_eq!(out.status.code(), Some(0), "{id}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn neunic_flags_tau() {
    let v = json(&bicrossed(&["reproduce", "neunic"]));
    assert_eq!(v["certified"], true);
    assert_eq!(v["tau_certifies"], false);
    assert_eq!(v["cases"][0]["sigma_tau"]["abelian"], true);
}

#[test]
fn doiexemp_emits_the_witness() {
    let v = json(&bicrossed(&["reproduce", "doiexemp"]));
    assert_eq!(v["phi_is_isomorphism"], true);
    assert_eq!(v["phi_images"].as_array().unwrap().len(), 6);
}

#[test]
fn classify_s3c4() {
    let out = bicrossed(&["classify", "--pair", &fixture("s3c4.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["index"], 2);
    assert_eq!(v["raw_count"], 4);
}

#[test]
fn census_one() {
    let v = json(&bicrossed(&["census", "1"]));
    assert_eq!(v["n"], 1);
    assert_eq!(v["count"], 1);
}

#[test]
fn output_is_independent_of_workers() {
    for args in [vec!["classify", "--pair"], vec!["enumerate", "--pair"]] {
        let mut one = args.clone();
        let path = fixture("s3c4.json");
        one.push(&path);
        let mut many = one.clone();
        one.extend(["--workers", "1"]);
        many.extend(["--workers", "4"]);
        assert_eq!(bicrossed(&one).stdout, bicrossed(&many).stdout);
    }
    assert_eq!(bicrossed(&["census", "6", "--workers", "1"]).stdout, bicrossed(&["census", "6", "--workers", "3"]).stdout);
}

#[test]
fn caps_and_budget_exit_two() {
    assert_eq!(bicrossed(&["census", "9"]).status.code(), Some(2));
    assert_eq!(bicrossed(&["alternating", "4"]).status.code(), Some(2));
    assert_eq!(bicrossed(&["enumerate", "--pair", &fixture("s3c4.json"), "--budget", "1"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_bicrossed"))
        .args(["census", "4"])
        .env("BICROSSED_CENSUS_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_three() {
    assert_eq!(bicrossed(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(bicrossed(&["census", "4", "--budget", "0"]).status.code(), Some(3));
    let bad = scratch("bad.json", "{ not json");
    assert_eq!(bicrossed(&["validate-pair", "--pair", &bad]).status.code(), Some(3));
    assert_eq!(bicrossed(&["validate-pair", "--pair", "/nonexistent/pair.json"]).status.code(), Some(3));
}

#[test]
fn validation_failures_exit_one() {
    let not_exact = scratch(
        "s4_bad.json",
        r#"{"group": {"degree": 4, "generators": ["(1 2)", "(2 3)", "(3 4)"]}, "A": ["(1 2)", "(2 3)"], "H": ["(1 2)", "(3 4)"]}"#,
    );
    let out = bicrossed(&["factorize", "--input", &not_exact]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["exact"], false);

    let bad_map = scratch("bad_map.json", &format!(r#"{{"pair": "{}", "r": [0, 1, 0, 0]}}"#, fixture("s3c4.json")));
    let out = bicrossed(&["validate-deformation", "--map", &bad_map]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(bicrossed(&["deform", "--map", &bad_map]).status.code(), Some(1));
}

#[test]
fn shipped_map_deforms_to_klein_group() {
    let out = bicrossed(&["deform", "--map", &fixture("primexem_r.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["psi_verified"], true);
    assert_eq!(v["deformed"]["group"]["element_orders"], serde_json::json!([1, 2, 2, 2]));
}

#[test]
fn corpus_entry_round_trip() {
    let corpus: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(fixture("factorizations.json")).unwrap()).unwrap();
    let entry = corpus.iter().find(|e| e["name"] == "S4 = S3 C4").unwrap();
    let path = scratch("s4.json", &entry.to_string());
    assert_eq!(bicrossed(&["factorize", "--input", &path]).status.code(), Some(0));
    assert_eq!(json(&bicrossed(&["index", "--input", &path]))["index"], 2);
    assert_eq!(json(&bicrossed(&["classify", "--factorization", &path]))["index"], 2);
    let pair = bicrossed(&["matched-pair", "--input", &path]);
    let pair_path = scratch("s4_pair.json", &String::from_utf8(pair.stdout).unwrap());
    assert_eq!(json(&bicrossed(&["validate-pair", "--pair", &pair_path]))["valid"], true);
    let comps = json(&bicrossed(&["complements", "--input", &path]));
    assert_eq!(comps["complements"].as_array().unwrap().len(), 4);
}

#[test]
fn text_tables_use_powers_of_x() {
    let out = bicrossed(&["sn-pair", "4", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("x^3")));
    assert!(text.starts_with("▷"));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("bicrossed-out-{}.json", std::process::id()));
    let out = bicrossed(&["census", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], 2);
}
