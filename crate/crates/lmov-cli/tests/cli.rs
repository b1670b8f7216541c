//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn lmov(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmov"))
        .args(args)
        .current_dir(dir)
        .env_remove("LMOV_DEGREE")
        .env_remove("LMOV_QORDER")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_unknot_then_verify_succeeds() {
    let dir = workdir("gen_verify");
    let gen = lmov(&dir, &["gen-unknot", "--degree", "3", "--out", "unknot.tbl"]);
    assert!(gen.status.success());
    for mode in ["q", "qinv"] {
        let verify = lmov(&dir, &["verify", "--in", "unknot.tbl", "--mode", mode]);
        assert_eq!(verify.status.code(), Some(0));
        assert!(stdout(&verify).contains("all 7 keys match"));
    }
}

#[test]
fn pipeline_emits_deterministic_tables() {
    let dir = workdir("pipeline");
    lmov(&dir, &["gen-unknot", "--degree", "2", "--out", "unknot.tbl"]);
    let run = lmov(&dir, &["pipeline", "--in", "unknot.tbl"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).contains("integrality (inv-bracket): 3/3 colors pass"));
    let names = ["z", "f", "fhat", "p", "n", "smalln", "checkn"];
    let first: Vec<String> = names
        .iter()
        .map(|s| fs::read_to_string(dir.join(format!("unknot.{s}.tbl"))).unwrap())
        .collect();
    let rerun = lmov(&dir, &["pipeline", "--in", "unknot.tbl"]);
    assert_eq!(rerun.status.code(), Some(0));
    for (name, before) in names.iter().zip(&first) {
        let after = fs::read_to_string(dir.join(format!("unknot.{name}.tbl"))).unwrap();
        assert_eq!(&after, before, "{name} table changed between runs");
    }
}

#[test]
fn pipeline_reports_integrality_failure() {
    let dir = workdir("bad_pipeline");
    fs::write(
        dir.join("bad.tbl"),
        "lmov-table v1\ntype w\nname bad\nl 1\ndegree 1\n---\n1\t0,0:1 / 0,0:1\n",
    )
    .unwrap();
    let run = lmov(&dir, &["pipeline", "--in", "bad.tbl"]);
    assert_eq!(run.status.code(), Some(3));
    assert!(stdout(&run).contains("color 1: FAIL"));
    assert!(!dir.join("bad.n.tbl").exists());
}

#[test]
fn literal_weight_convention_changes_tables() {
    let dir = workdir("literal");
    lmov(&dir, &["gen-unknot", "--degree", "2", "--out", "unknot.tbl"]);
    lmov(&dir, &["pipeline", "--in", "unknot.tbl"]);
    let default_p = fs::read_to_string(dir.join("unknot.p.tbl")).unwrap();
    let run = lmov(&dir, &["pipeline", "--in", "unknot.tbl", "--literal-Tinv"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).contains("integrality (bracket)"));
    let literal_p = fs::read_to_string(dir.join("unknot.p.tbl")).unwrap();
    assert_ne!(default_p, literal_p);
}

#[test]
fn symmetries_pass_on_unknot() {
    let dir = workdir("symmetries");
    lmov(&dir, &["gen-unknot", "--degree", "2", "--out", "unknot.tbl"]);
    let run = lmov(&dir, &["symmetries", "--in", "unknot.tbl", "--q-order", "8"]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(stdout(&run).matches(": pass").count(), 6);
}

#[test]
fn product_writes_the_closed_form() {
    let dir = workdir("product");
    lmov(&dir, &["gen-unknot", "--degree", "3", "--out", "unknot.tbl"]);
    let run = lmov(&dir, &["product", "--in", "unknot.tbl", "--out", "rep.tbl"]);
    assert_eq!(run.status.code(), Some(0));
    let rep = fs::read_to_string(dir.join("rep.tbl")).unwrap();
    assert!(rep.contains("1:0:-1\t1\n"));
    assert!(rep.contains("1:0:1\t-1\n"));
    assert_eq!(rep.lines().filter(|l| l.contains('\t')).count(), 2);
}

#[test]
fn environment_sets_default_truncations() {
    let dir = workdir("env");
    lmov(&dir, &["gen-unknot", "--degree", "3", "--out", "unknot.tbl"]);
    let run = Command::new(env!("CARGO_BIN_EXE_lmov"))
        .args(["verify", "--in", "unknot.tbl"])
        .current_dir(&dir)
        .env("LMOV_DEGREE", "2")
        .env("LMOV_QORDER", "6")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).contains("mode q, order 6, degree 2"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = workdir("usage");
    let run = lmov(&dir, &["verify", "--bogus"]);
    assert_eq!(run.status.code(), Some(2));
    let run = lmov(&dir, &["frobnicate"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn input_errors_exit_1() {
    let dir = workdir("input_errors");
    let run = lmov(&dir, &["verify", "--in", "missing.tbl"]);
    assert_eq!(run.status.code(), Some(1));
    fs::write(dir.join("garbled.tbl"), "not a table\n").unwrap();
    let run = lmov(&dir, &["verify", "--in", "garbled.tbl"]);
    assert_eq!(run.status.code(), Some(1));
    lmov(&dir, &["gen-unknot", "--degree", "2", "--out", "unknot.tbl"]);
    let run = lmov(&dir, &["verify", "--in", "unknot.tbl", "--degree", "5"]);
    assert_eq!(run.status.code(), Some(1));
}
