//! End-to-end tests of the `exhopf` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn exhopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exhopf"))
        .args(args)
        .env("EXHOPF_FIXTURES", concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = exhopf(&all);
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn wu_prints_polynomial_and_checks() {
    let out = exhopf(&["wu", "--p", "2", "--k", "1", "--m", "3", "--check-prop51"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("P^1 c3 = "), "{text}");
    assert!(text.contains("PASS closed form"));
    assert!(text.contains("PASS schur expansion"));
}

#[test]
fn every_report_carries_the_schema_version() {
    for args in [
        &["wu", "--p", "3", "--k", "1", "--m", "2"][..],
        &["data", "--group", "G2", "--prime", "2", "--dump", "theta"],
        &["bst", "--group", "G2", "--prime", "2"],
        &["hopf", "--group", "G2", "--prime", "2", "--dump"],
    ] {
        let v = json(args);
        assert_eq!(v["schema"], 1, "{args:?}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn structure_constants_of_e7_at_three_match_the_list() {
    let out = exhopf(&["lemma22", "--group", "E7", "--prime", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS E7 p=3: 6 nonzero entries"));
}

#[test]
fn single_pair_matrix_passes() {
    let out = exhopf(&["all", "--pairs", "G2:2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("PASS G2 p=2"));
}

#[test]
fn matrix_is_deterministic_across_thread_counts() {
    let one = exhopf(&["--jobs", "1", "--format", "json", "all", "--pairs", "G2:2,F4:3"]);
    let four = exhopf(&["--jobs", "4", "--format", "json", "all", "--pairs", "F4:3,G2:2"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn matrix_matches_golden_files() {
    let out = exhopf(&["all", "--pairs", "G2:2,F4:3", "--check-golden"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("golden files: match"));
}

#[test]
fn normal_form_reads_standard_input() {
    let dir = std::env::temp_dir().join(format!("exhopf-nf-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let gens = dir.join("gens.txt");
    std::fs::write(&gens, "# ideal\nc2^2-c4\nc3\n").unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_exhopf"))
        .args(["nf", "--ring", "3:c2,c3,c4", "--against", gens.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"c2^3+c2*c4\nc3*c2\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-c2^3\n0\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn failures_exit_nonzero_and_name_the_section() {
    let out = exhopf(&["lemma22", "--group", "E8", "--prime", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL: E8 p=3"));
}

#[test]
fn slow_strategies_need_deep() {
    let out = exhopf(&["bst", "--group", "E8", "--prime", "2", "--strategy", "method1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--deep"));
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!exhopf(&["data", "--group", "A5", "--prime", "2", "--dump", "profile"]).status.success());
    assert!(!exhopf(&["bst", "--group", "G2", "--prime", "7"]).status.success());
}
