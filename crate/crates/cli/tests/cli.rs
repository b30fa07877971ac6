use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn gmcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmcat"))
        .args(args)
        .env_remove("GMCAT_BOUND")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = gmcat(&all);
    let value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    (out.status.code().expect("exit code"), value)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn builtin_operad_validates() {
    let out = gmcat(&["validate", "operad", "--operad", "associative"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn corrupted_composition_names_the_tuple() {
    let out = gmcat(&["validate", "operad", "--operad", &fixture("ass_corrupted.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("γ((1,2); (1), (1))"), "{}", stdout(&out));
}

#[test]
fn commutative_operad_is_not_sigma_free() {
    let out = gmcat(&["validate", "operad", "--operad", "commutative", "--require-sigma-free"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fixes object"), "{}", stdout(&out));
}

#[test]
fn malformed_input_is_an_input_error() {
    let out = gmcat(&["validate", "multicat", &fixture("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("line 2"), "{}", stdout(&out));
    let out = gmcat(&["validate", "multicat", &fixture("terminal.json"), "--bound", "3", "--truncate", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_multicategory_encodes_over_both_operads() {
    for operad in ["barratt-eccles", "associative"] {
        let out = gmcat(&["validate", "multicat", &fixture("pointed.json"), "--operad", operad]);
        assert_eq!(out.status.code(), Some(0), "{operad}: {}", stdout(&out));
    }
}

#[test]
fn free_hom_set_counts() {
    let terminal = fixture("terminal.json");
    let (code, v) = json(&["free", &terminal, "--hom", "*,*", "*,*"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["classes"], 4);
    let (_, v) = json(&["free", &terminal, "--hom", "*,*", "*,*", "--operad", "associative"]);
    assert_eq!(v["data"]["classes"], 3);
    let (_, v) = json(&["free", &terminal, "--hom", "", ""]);
    assert_eq!(v["data"]["classes"], 1);
    let (_, v) = json(&["free", &terminal, "--hom", "*,*", "*", "--hat"]);
    assert_eq!(v["data"]["classes"], 2);
}

#[test]
fn free_beyond_the_bound_exits_three() {
    let out = gmcat(&["free", &fixture("terminal.json"), "--hom", "*,*,*", "*", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn underlying_dump_and_bound_override() {
    let z2 = fixture("z2.json");
    let (code, v) = json(&["underlying", &z2]);
    assert_eq!(code, 0);
    let by_arity = v["data"]["morphisms_by_arity"].as_object().unwrap();
    assert_eq!(by_arity.keys().collect::<Vec<_>>(), ["0", "1", "2", "3"]);
    // Each source list has exactly one target in a discrete group.
    assert_eq!(by_arity["2"], 4);

    let out = Command::new(env!("CARGO_BIN_EXE_gmcat"))
        .args(["underlying", &z2, "--json"])
        .env("GMCAT_BOUND", "2")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"]["bound"], 2);
    assert!(v["data"]["morphisms_by_arity"].get("3").is_none());

    let out = gmcat(&["underlying", &fixture("z2_broken_unit.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn adjunction_for_the_standard_pairs() {
    let out = gmcat(&["check-adjunction", &fixture("terminal.json"), &fixture("z2.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = gmcat(&[
        "check-adjunction",
        &fixture("terminal.json"),
        &fixture("free_point.json"),
        "--operad",
        "associative",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn fault_injected_algebra_fails_the_adjunction() {
    let out = gmcat(&["check-adjunction", &fixture("terminal.json"), &fixture("z2_broken_unit.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL] triangles: triangle-algebra"), "{}", stdout(&out));
}

#[test]
fn provisional_mode_shows_the_presheaf_failure() {
    let (code, v) = json(&["check-adjunction", &fixture("terminal.json"), &fixture("z2.json"), "--hat"]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["multicategory-map: preserves-action"]);
    assert!(v["data"]["witness"].is_string());
    assert_eq!(v["data"]["equivalent_in_quotient"], true);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.join(format!("gmcat-determinism-{}-{i}.json", std::process::id()))).collect();
    for p in &paths {
        let out = gmcat(&["validate", "operad", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    for p in &paths {
        let _ = std::fs::remove_file(p);
    }
}
