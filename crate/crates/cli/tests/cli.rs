use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logarr"))
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}.arr", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn st_of_ex1() {
    let o = run(&["st", &fixture("ex1")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x^4 + 4*x^3 + 5*x^2 + 3*x + 1\n");
    let o = run(&["st", "--order", "3", &fixture("ex1")]);
    assert_eq!(stdout(&o), "x^7 + 3*x^6 + 7*x^5 + 9*x^4 + 9*x^3 + 6*x^2 + 3*x + 1\n");
}

#[test]
fn chi_of_boolean() {
    let o = run(&["chi", &fixture("bool3")]);
    assert_eq!(stdout(&o), "t^3 - 3*t^2 + 3*t - 1\n");
}

#[test]
fn bipoly_from_stdin() {
    let text = std::fs::read_to_string(fixture("ex1")).unwrap();
    let o = run_stdin(&["st-bipoly", "-"], &text);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Psi = -x^4*t^3 + 4*x^3*t^2 - 5*x^2*t - x*t + 2*x + 1\n"));
    let o = run_stdin(&["--format", "json", "st-bipoly", "-"], &text);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["a"], serde_json::json!(["0/1", "0/1", "-1/1", "1/1"]));
    assert_eq!(v["f"].as_array().unwrap().len(), 4);
    assert!(v["psi"].as_array().unwrap().iter().all(|t| t["c"].is_string() && t["e"].is_array()));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let o = run_stdin(&["info", "-"], "# c\nell 2\nH 1 0\nH 2 0\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("line 3"), "{err}");
    let o = run(&["info", "/nonexistent.arr"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exit_3() {
    let o = run(&["--max-pairs", "3", "logmod", &fixture("ex2_A"), "--p", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn genericity_failure_exit_1() {
    let o = run(&["--max-eta-attempts", "0", "st-algebra", &fixture("ex1")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn freeness_and_tameness() {
    let o = run(&["--format", "json", "free", &fixture("ex2_A")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["free"], true);
    assert_eq!(v["degrees"], serde_json::json!([1, 3, 3, 3]));
    let o = run(&["--format", "json", "tame", &fixture("ex2_B")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tame"], false);
    assert_eq!(v["pd_omega"][1], 2);
}

#[test]
fn betti_of_ex1() {
    let o = run(&["--format", "json", "logmod", &fixture("ex1"), "--p", "1", "--omega"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["resolution"]["betti"].as_array().unwrap();
    let got: Vec<(i64, i64, i64)> = rows
        .iter()
        .map(|r| (r["i"].as_i64().unwrap(), r["d"].as_i64().unwrap(), r["count"].as_i64().unwrap()))
        .collect();
    assert_eq!(got, vec![(0, -1, 4), (1, 0, 1)]);
    let o = run(&["betti", &fixture("ex1")]);
    assert!(stdout(&o).contains("D^2: pd 1 reg 3"));
}

#[test]
fn st_algebra_is_seed_deterministic() {
    let args = ["--format", "json", "st-algebra", &fixture("ex1"), "--order", "3", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["hilbert_function"], serde_json::json!([1, 3, 6, 9, 9, 7, 3, 1]));
    let o = run(&["st-algebra", &fixture("ex1"), "--eta", "x1^2 + x2^2 + x3^2"]);
    assert!(stdout(&o).contains("hilbert function = [1, 3, 5, 4, 1]"));
}

#[test]
fn verify_paper_suite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paper.json");
    let o = run(&["verify", "--suite", "paper", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(" 0 fail (0 hard)"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["tally"]["fail"], 0);
    let b_algebra = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "st_algebra_equality" && r["subject"]["id"] == "ex2_B")
        .unwrap();
    assert_eq!(b_algebra["verdict"], "beyond-theorem");
    assert_eq!(b_algebra["witnesses"]["equal"], false);
}

#[test]
fn verify_random_suite_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let o = run(&["verify", "--suite", "random", "--seed", "5", "--count", "6", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
}

#[test]
fn verify_file_suite_and_empty() {
    let o = run(&["verify", "--suite", "file", &fixture("braid3"), &fixture("multi_x2y")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 items"));
    let o = run(&["verify", "--suite", "file"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 items, 0 pass"));
}

#[test]
fn essentialize_drops_center() {
    let o = run_stdin(&["essentialize", "-"], "ell 3\nH 1 0 0\nH 0 1 0 m=2\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ell 2\nH 0 1 m=2\nH 1 0\n");
    let o = run_stdin(&["info", "-"], "ell 3\nH 1 0 0\nH 0 1 0 m=2\n");
    let out = stdout(&o);
    assert!(out.contains("essential = false") && out.contains("|m| = 3"), "{out}");
}

#[test]
fn lattice_lists_flats() {
    let o = run(&["lattice", &fixture("ex1")]);
    let out = stdout(&o);
    assert!(out.contains("codim 3:\n  mu =  -3"));
    assert!(out.ends_with("chi = t^3 - 4*t^2 + 6*t - 3\n"));
}
