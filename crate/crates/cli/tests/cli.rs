use std::path::PathBuf;
use std::process::{Command, Output};

use rcat_core::fixtures;
use rcat_core::format::CategoryFile;
use rcat_core::mcat::MSystem;

fn rcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcat"))
        .args(args)
        .output()
        .expect("rcat runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).expect("golden file")
}

fn bundled(name: &str) -> CategoryFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("fixtures/{name}.json"));
    CategoryFile::read(&path).expect("bundled fixture parses")
}

#[test]
fn check_pfin2_passes() {
    let out = rcat(&["check", "builtin:pfin2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"status\": \"pass\""));
}

#[test]
fn cocheck_ab2_fails_with_diag_witness() {
    let out = rcat(&["cocheck", "builtin:ab2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("diag"));
}

#[test]
fn cocheck_inj2_passes() {
    assert_eq!(rcat(&["cocheck", "builtin:inj2"]).status.code(), Some(0));
    assert_eq!(rcat(&["extensive", "builtin:inj2"]).status.code(), Some(0));
}

#[test]
fn kr_output_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kr.json");
    let out = out.to_str().unwrap();
    assert_eq!(rcat(&["kr", "builtin:max5b", "-o", out]).status.code(), Some(0));
    let checked = rcat(&["check", out]);
    assert_eq!(checked.status.code(), Some(0), "{}", stdout(&checked));
    assert!(stdout(&checked).contains("restriction/R4"));
}

#[test]
fn kr_and_par_match_golden_files() {
    for name in ["triv3", "max5a", "max5b", "pfin2"] {
        let out = rcat(&["kr", &format!("builtin:{name}")]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), golden(&format!("kr_{name}.json")), "kr {name}");
    }
    for name in ["inj2", "ab2"] {
        let out = rcat(&["par", &format!("builtin:{name}")]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), golden(&format!("par_{name}.json")), "par {name}");
    }
}

#[test]
fn par_then_mtotal_round_trip_checks() {
    let dir = tempfile::tempdir().unwrap();
    let par = dir.path().join("par.json");
    let mt = dir.path().join("mt.json");
    let (par, mt) = (par.to_str().unwrap(), mt.to_str().unwrap());
    assert_eq!(rcat(&["par", "builtin:inj2", "-o", par]).status.code(), Some(0));
    assert_eq!(rcat(&["cl-check", par]).status.code(), Some(0));
    assert_eq!(rcat(&["mtotal", par, "-o", mt]).status.code(), Some(0));
    assert_eq!(rcat(&["msystem-check", mt]).status.code(), Some(0));
}

#[test]
fn fixtures_manifest_lists_provenance() {
    let out = rcat(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let tag = |name: &str| {
        manifest["fixtures"]
            .as_array()
            .unwrap()
            .iter()
            .find(|f| f["name"] == name)
            .map(|f| f["provenance"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(tag("triv3"), "trivial");
    assert_eq!(tag("max5b"), "max monoid, restriction idempotents 0 and odd");
    assert_eq!(tag("pfin2"), "sets and partial functions");
}

#[test]
fn bundled_fixtures_match_library_definitions() {
    let triv3 = fixtures::triv3();
    let expected = CategoryFile::from_restr(&triv3).with_msystem(triv3.cat(), &MSystem::isos(triv3.cat()));
    assert_eq!(bundled("triv3"), expected);
    assert_eq!(bundled("max5a"), CategoryFile::from_restr(&fixtures::max5_a()));
    assert_eq!(bundled("max5b"), CategoryFile::from_restr(&fixtures::max5_b()));
    assert_eq!(bundled("pfin2"), CategoryFile::from_restr(&fixtures::pfin2()));
    let (c, ms) = fixtures::inj2();
    assert_eq!(bundled("inj2"), CategoryFile::from_cat(&c).with_msystem(&c, &ms));
    let (c, ms) = fixtures::ab2();
    assert_eq!(bundled("ab2"), CategoryFile::from_cat(&c).with_msystem(&c, &ms));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["equiv-verify", "builtin:inj2"][..],
        &["check", "builtin:max5b", "--mutations", "10", "--seed", "7"][..],
        &["check", "builtin:inj2", "--mutations", "20", "--seed", "7"][..],
    ] {
        assert_eq!(stdout(&rcat(args)), stdout(&rcat(args)), "{args:?}");
    }
}

#[test]
fn mutation_survivors_fail_the_check() {
    let out = rcat(&["check", "builtin:max5b", "--mutations", "30"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(
        text.matches("restriction-mutation-detected").count(),
        4,
        "3 violations plus the tally"
    );
    let out = rcat(&["check", "builtin:pfin2", "--mutations", "40", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn yoneda_output_is_a_checked_restriction_presheaf() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.json");
    let y = y.to_str().unwrap();
    assert_eq!(rcat(&["yoneda", "builtin:max5b", "*", "-o", y]).status.code(), Some(0));
    let out = rcat(&["rpsh-check", y, "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("unique-restriction"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(rcat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rcat(&["check", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(rcat(&["check", "/definitely/not/here.json"]).status.code(), Some(2));
    assert_eq!(rcat(&["cl-check", "builtin:inj2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"objects": [], "extra": 1}"#).unwrap();
    assert_eq!(rcat(&["check", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn text_format_summarizes() {
    let out = rcat(&["classifier", "builtin:inj2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("classifier: pass"));
}
