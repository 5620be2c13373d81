use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_btor2kit");

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.btor2"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("BTOR2KIT_SOLVER").output().unwrap()
}

fn run_file(args: &[&str], text: &str) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.btor2");
    std::fs::write(&path, text).unwrap();
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    run(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_accepts_the_corpus() {
    for name in ["counter", "factorial", "array_fill", "wide"] {
        let o = run(&["validate", corpus(name).to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
    }
}

#[test]
fn validate_reports_forward_references_with_a_location() {
    let o = run_file(&["validate"], "1 sort bitvec 4\n2 add 1 3 3\n3 zero 1\n");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains(":2"), "{}", stderr(&o));
}

#[test]
fn validate_rejects_fairness() {
    let o = run_file(&["validate"], "1 sort bitvec 1\n2 input 1\n3 fair 2\n");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unsupported: fairness"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_error() {
    assert_eq!(code(&run(&["validate", "/nonexistent/x.btor2"])), 2);
}

#[test]
fn roundtrip_check_passes_and_prints_btor2() {
    let o = run(&["roundtrip", "--check", corpus("factorial").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains(" bad "));
    let o = run_file(&["validate"], &stdout(&o));
    assert_eq!(code(&o), 0);
}

#[test]
fn sim_reports_violations() {
    let path = corpus("counter");
    let o = run(&["sim", "--cycles", "10", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["sim", "--cycles", "20", "--trace", "-", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("1111"));
}

#[test]
fn sim_is_deterministic() {
    let path = corpus("array_nondet");
    let args = ["sim", "--cycles", "8", "--seed", "5", "--trace", "-", path.to_str().unwrap()];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(!stdout(&a).is_empty());
}

#[test]
fn bmc_internal_exit_codes() {
    let path = corpus("counter");
    let safe = run(&["bmc", "--internal", "--bound", "14", path.to_str().unwrap()]);
    assert_eq!(code(&safe), 0, "{}", stderr(&safe));
    let bad = run(&["bmc", "--internal", "--bound", "15", "--witness", "-", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    let w = stdout(&bad);
    assert!(w.starts_with("sat\nb0\n"), "{w}");
    assert!(w.contains("#15\n0 1111"), "{w}");
    assert!(w.trim_end().ends_with('.'));
}

#[test]
fn bmc_over_budget_is_an_error() {
    let path = corpus("array_nondet");
    let o = run(&["bmc", "--internal", "--bound", "15", "--budget", "4", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bmc_emits_smtlib_without_a_solver() {
    let path = corpus("counter");
    let o = run(&["bmc", "--bound", "3", "--emit-smt", "-", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.starts_with("(set-option :produce-models true)"));
    assert!(s.contains("(set-logic QF_BV)"));
    assert!(s.contains("(check-sat)"));
}

#[test]
fn bmc_without_any_engine_is_an_error() {
    let o = run(&["bmc", "--solver", "", corpus("counter").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bmc_with_a_missing_solver_is_an_error() {
    let o = run(&["bmc", "--solver", "/nonexistent/solver", corpus("counter").to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn bmc_with_a_solver_that_gives_up_is_unknown() {
    let o = run(&["bmc", "--solver", "sh -c 'cat >/dev/null; echo unknown'", corpus("counter").to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn bmc_with_a_bogus_sat_answer_is_unknown() {
    let o = run(&[
        "bmc",
        "--solver",
        "sh -c 'cat >/dev/null; echo sat; echo \"(model)\"'",
        corpus("factorial").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn stats_on_an_empty_file_are_zero() {
    let o = run_file(&["stats"], "");
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("nodes 0"), "{s}");
    assert!(s.contains("states 0"), "{s}");
    assert!(s.contains("bads 0"), "{s}");
}

#[test]
fn stats_count_the_counter() {
    let o = run(&["stats", corpus("counter").to_str().unwrap()]);
    let s = stdout(&o);
    assert!(s.contains("states 1") && s.contains("bads 1") && s.contains("max-width 4"), "{s}");
}
