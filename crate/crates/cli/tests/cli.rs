use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const SHIFT: &str =
    r#"{"n":2,"H":[[2,1]],"domain":"((* *) *)","range":"(* (* *))","tau":[1,2,3],"labels":[[1,2],[1,2],[1,2]]}"#;
const IDENTITY: &str = r#"{"n":2,"H":[],"domain":"*","range":"*","tau":[1],"labels":[[1,2]]}"#;
const IDENTITY_Z2: &str = r#"{"n":2,"H":[[2,1]],"domain":"*","range":"*","tau":[1],"labels":[[1,2]]}"#;
/// Order 3: cycles the three leaves of `(* (* *))`.
const ROTATION: &str = r#"{"n":2,"H":[],"domain":"(* (* *))","range":"(* (* *))","tau":[2,3,1],"labels":[[1,2],[1,2],[1,2]]}"#;

fn vnh(args: &[&str]) -> Output {
    vnh_with_stdin(args, "")
}

fn vnh_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vnh"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.is_ascii(), "non-ASCII output: {text}");
    text
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn identity_is_conjugate_to_itself() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", IDENTITY);
    let out = vnh(&["conjugate", &id, &id]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "conjugate: true\n");
}

#[test]
fn a_shift_is_not_conjugate_to_the_identity() {
    let out = vnh(&["conjugate", SHIFT, IDENTITY_Z2]);
    assert_eq!(stdout(&out), "conjugate: false\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compose_then_reduce_round_trips() {
    let composed = vnh(&["compose", SHIFT, SHIFT]);
    assert!(composed.status.success());
    let reduced = vnh_with_stdin(&["reduce"], &stdout(&composed));
    assert!(reduced.status.success());
    let again = vnh(&["parse", stdout(&reduced).trim()]);
    assert_eq!(stdout(&again), stdout(&reduced));
}

#[test]
fn order_and_torsion() {
    assert_eq!(stdout(&vnh(&["order", ROTATION])), "order: 3\n");
    assert_eq!(stdout(&vnh(&["torsion", ROTATION])), "torsion: true\n");
    assert_eq!(stdout(&vnh(&["order", SHIFT])), "order: infinite\n");
}

#[test]
fn census_matches_the_predicted_count() {
    let out = vnh(&["census", "--n", "2", "--H", "id", "--p", "3", "--max-leaves", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("classes=2 expected=2\n"));
}

#[test]
fn dot_output_is_byte_stable() {
    let a = vnh(&["diagram", "--dot", SHIFT]);
    let b = vnh(&["diagram", "--dot", SHIFT]);
    assert!(stdout(&a).starts_with("digraph"));
    assert_eq!(a.stdout, b.stdout);
    let closed = vnh(&["close", "--dot", ROTATION]);
    assert!(closed.status.success());
    assert!(stdout(&closed).starts_with("digraph"));
}

#[test]
fn parse_errors_name_the_field_and_exit_2() {
    let bad = r#"{"n":2,"H":[],"domain":"(* *)","range":"(* *)","tau":[1,3],"labels":[[1,2],[1,2]]}"#;
    let out = vnh(&["parse", bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau"));
    let out = vnh(&["parse", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_subgroups_exit_2() {
    let out = vnh(&["compose", SHIFT, ROTATION]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_finds_a_conjugator_or_reports_inconclusive() {
    let inverse = stdout(&vnh(&["invert", SHIFT]));
    let out = vnh(&["oracle", SHIFT, inverse.trim()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("oracle: conjugate\nconjugator: {"));
    let out = vnh(&["conjugate", "--oracle-bound", "4", SHIFT, IDENTITY_Z2]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out), "conjugate: inconclusive\n");
}

#[test]
fn trace_goes_to_stderr() {
    let inverse = stdout(&vnh(&["invert", SHIFT]));
    let composed = stdout(&vnh(&["compose", SHIFT, inverse.trim()]));
    let out = vnh(&["--trace", "reduce", composed.trim()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), format!("{IDENTITY_Z2}\n"));
    assert!(String::from_utf8_lossy(&out.stderr).lines().count() >= 2);
}
