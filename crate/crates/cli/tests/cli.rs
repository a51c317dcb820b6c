use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn sharecheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharecheck")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn clean_program_exits_zero() {
    let o = sharecheck(&["analyze", &fixture("bst.pcore"), "--mode", "old"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("mode: old\n"));
}

#[test]
fn violation_exits_one_with_position() {
    let o = sharecheck(&["analyze", &fixture("assign_violation.pcore")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("25:7: "), "{}", stdout(&o));
}

#[test]
fn json_report_lists_points_and_diagnostics() {
    let o = sharecheck(&["analyze", &fixture("colours_missing_bang.pcore"), "--format", "json", "--dump-points"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["mode"], "new");
    assert!(v["points"].as_object().unwrap().contains_key("colours:10"));
    let diags = v["diagnostics"].as_array().unwrap();
    assert!(diags.iter().any(|d| d["kind"] == "MissingBang" && d["func"] == "colours"), "{diags:?}");
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze", &fixture("rtrees.pcore"), "--format", "json", "--dump-points", "--mode", "old"];
    let a = sharecheck(&args);
    let b = sharecheck(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn run_prints_trace() {
    let o = sharecheck(&[
        "run",
        &fixture("bst.pcore"),
        "--entry",
        "list_bst",
        "--args",
        "Cons 2 (Cons 1 Nil)",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["outcome"]["status"], "returned");
    assert!(!v["points"].as_array().unwrap().is_empty());
}

#[test]
fn soundness_check_reports_no_violations() {
    let o = sharecheck(&[
        "check-soundness",
        &fixture("bst.pcore"),
        "--entry",
        "list_bst_du",
        "--args",
        "Cons 2 (Cons 5 Nil), Ref TNil",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["points_checked"].as_u64().unwrap() > 0);
}

#[test]
fn errors_exit_two() {
    let o = sharecheck(&["analyze", "/nonexistent/file.pcore"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = sharecheck(&["run", &fixture("bst.pcore"), "--entry", "list_bst", "--args", "Cons 1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sharecheck(&["run", &fixture("bst.pcore"), "--entry", "missing"]);
    assert_eq!(o.status.code(), Some(2));
}
