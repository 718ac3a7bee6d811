use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pgtlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgtlab")).args(args).output().unwrap()
}

fn theory(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/theories").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn flagship_matches_golden_output() {
    let o = pgtlab(&["prove", &theory("itrev.thy")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("itrev.out"));
    let err = stderr(&o);
    assert!(err.starts_with("itrev_rev: proved ("), "{err}");
    assert!(err.contains("49 kept"), "{err}");
}

#[test]
fn non_theorems_are_refuted() {
    let o = pgtlab(&["example", "nonthm"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), golden("nonthm.out"));
}

#[test]
fn every_bundled_example_runs() {
    let list = pgtlab(&["examples"]);
    let names: Vec<String> = stdout(&list).lines().map(String::from).collect();
    assert_eq!(names, ["itrev", "rev_rev", "nat_add", "nonthm"]);
    for n in &names {
        let code = pgtlab(&["example", n]).status.code();
        assert_eq!(code, Some(if n == "nonthm" { 1 } else { 0 }), "{n}");
    }
}

#[test]
fn dind_override_gives_no_proof() {
    let o = pgtlab(&["prove", &theory("itrev.thy"), "--strategy-override", "DInd"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(* no-proof-found *)"), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(pgtlab(&["prove", "/nonexistent/theory.thy"]).status.code(), Some(2));
    assert_eq!(pgtlab(&["example", "missing"]).status.code(), Some(2));
    assert_eq!(pgtlab(&["prove", &theory("itrev.thy"), "--strategy-override", "Nope"]).status.code(), Some(2));
    assert_eq!(pgtlab(&["prove", &theory("itrev.thy"), "--max-nodes", "0"]).status.code(), Some(2));
    assert_eq!(pgtlab(&["prove", &theory("itrev.thy"), "--goal", "nope"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "bad.thy");
    std::fs::write(&bad, "primrec f :: \"nat => nat\" where \"f x = x\"\n").unwrap();
    let o = pgtlab(&["prove", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "), "{}", stderr(&o));
}

#[test]
fn tiny_budget_is_reported() {
    let o = pgtlab(&["example", "itrev", "--max-nodes", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(* budget-cut *)"));
}

#[test]
fn exports_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let (json, dot, dump) = (tmp(&dir, "t.json"), tmp(&dir, "t.dot"), tmp(&dir, "c.txt"));
    let o = pgtlab(&[
        "example",
        "itrev",
        "--trace-json",
        json.to_str().unwrap(),
        "--trace-dot",
        dot.to_str().unwrap(),
        "--dump-conjectures",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));

    let dump = std::fs::read_to_string(dump).unwrap();
    assert!(dump.lines().any(|l| l.starts_with("!!Nil. itrev xs Nil = rev xs @ Nil\t# ")));
    assert!(dump.lines().any(|l| l.starts_with("!!Nil. itrev xs Nil = Nil @ rev xs\t# ")));

    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph search {"));
    assert_eq!(dot.matches("n0 -> ").count(), 49);

    let json = std::fs::read_to_string(json).unwrap();
    assert!(json.contains("\"outcome\": \"solved\""));
    assert!(json.contains("\"outcome\": \"pruned-refuted\""));
}

#[test]
fn several_goals_get_separate_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = tmp(&dir, "trace.json");
    let o = pgtlab(&["example", "nat_add", "--trace-json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for g in ["add_assoc", "add_comm", "qadd_add", "qadd_0"] {
        assert!(tmp(&dir, &format!("trace.{g}.json")).exists(), "{g}");
    }
}

#[test]
fn random_quickcheck_is_seeded() {
    let run = |seed: &str| stdout(&pgtlab(&["example", "nonthm", "--qc-mode", "random", "--seed", seed]));
    let a = run("7");
    assert_eq!(a, run("7"));
    assert!(a.contains("refuted-goal"));
}
