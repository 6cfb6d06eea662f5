use std::path::PathBuf;
use std::process::{Command, Output};

const BAD: &str = "c ([x:nat][y:num z] z) : nat";
const GOOD: &str = "c ([x:nat][y:num x] z) : nat";

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn collision() -> String {
    fixture("collision.lf").to_str().unwrap().to_owned()
}

fn lfhh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfhh")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_signature(text: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sig.lf");
    std::fs::write(&path, text).unwrap();
    (dir, path.to_str().unwrap().to_owned())
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&lfhh(&[])), 2);
    assert_eq!(code(&lfhh(&["prove", &collision(), "--judgment", GOOD])), 2);
    assert_eq!(code(&lfhh(&["check", &collision(), "--judgment", GOOD, "--conversion", "eta"])), 2);
}

#[test]
fn parse_errors_carry_a_location() {
    let (_dir, path) = temp_signature("nat : type.\nz : nat\ns : nat.\n");
    let out = lfhh(&["encode", &path]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains(&format!("{path}:3:")), "{}", stderr(&out));
}

#[test]
fn ill_formed_signatures_are_rejected() {
    let (_dir, path) = temp_signature("nat : type.\nbad : num.\n");
    let out = lfhh(&["encode", &path]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error: "));
    assert!(stderr(&out).contains(&format!("{path}:2:")), "{}", stderr(&out));
}

#[test]
fn unbound_names_in_judgments_exit_2() {
    let out = lfhh(&["check", &collision(), "--judgment", "s z : nat"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("s z : nat"));
}

#[test]
fn check_verdicts() {
    let good = lfhh(&["check", &collision(), "--judgment", GOOD]);
    assert_eq!(code(&good), 0);
    assert!(stdout(&good).starts_with("derivable: "));
    for mode in ["beta", "beta-eta"] {
        let bad = lfhh(&["check", &collision(), "--judgment", BAD, "--conversion", mode]);
        assert_eq!(code(&bad), 1);
        assert!(stdout(&bad).contains("(`num x` vs `num z`)"));
    }
}

#[test]
fn prove_reports_failure_with_exit_1() {
    let out = lfhh(&["prove", &collision(), "--judgment", "z : num z", "--depth", "6"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("not proved: hastype z (num z)"));
}

#[test]
fn prove_renders_the_derivation() {
    let out = lfhh(&["prove", &collision(), "--judgment", GOOD, "--depth", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[w := \\x:tm. \\y:tm. z]"), "{}", stdout(&out));
    let shallow = lfhh(&["prove", &collision(), "--judgment", GOOD, "--depth", "1"]);
    assert_eq!(code(&shallow), 1);
}

#[test]
fn encode_writes_the_program() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("collision.hh");
    let out = lfhh(&["encode", &collision(), "--emit-reflected", "-o", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, std::fs::read_to_string(fixture("collision_encoded.golden")).unwrap());
}

#[test]
fn difftest_exit_codes() {
    let small = lfhh(&["difftest", &collision(), "--max-size", "1"]);
    assert_eq!(code(&small), 0, "{}", stdout(&small));
    let zero = lfhh(&["difftest", &collision(), "--max-size", "3", "--depth-mult", "0"]);
    assert_eq!(code(&zero), 2);
    assert!(stderr(&zero).contains("depth"), "{}", stderr(&zero));
}

#[test]
fn difftest_json_has_a_schema_version() {
    let out = lfhh(&["difftest", &collision(), "--max-size", "3", "--format", "json", "--threads", "2"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["schema"], 1);
    assert!(report["mismatches"].as_array().unwrap().is_empty());
}
