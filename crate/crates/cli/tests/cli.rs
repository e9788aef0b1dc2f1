use std::io::Write;
use std::process::{Command, Output, Stdio};

use nonclassical::algebra::space::Space;
use nonclassical::ncpoly::parse_poly;
use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ncpoly"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().expect("stdin").write_all(stdin.as_bytes()).expect("write stdin");
    child.wait_with_output().expect("binary exits")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn quartic_text(n: usize) -> String {
    let mut terms = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    terms.push(format!("1/2*x{a}*x{b}*x{c}*x{d}"));
                }
            }
        }
    }
    terms.join(" + ")
}

#[test]
fn root_then_multiply_round_trips() {
    let original = "1/4*x1*x2 + 1/2*x3 + 1/8";
    let root = run(&["root", "--p", "2", "--n", "3"], original);
    assert_eq!(root.status.code(), Some(0), "{}", String::from_utf8_lossy(&root.stderr));
    let back = run(&["mulp", "--p", "2", "--n", "3", "--json"], &stdout(&root));
    assert_eq!(back.status.code(), Some(0));
    let json: Value = serde_json::from_str(&stdout(&back)).unwrap();
    let expected = parse_poly(&Space::new(2, 3).unwrap(), original).unwrap().to_json();
    assert_eq!(json, serde_json::to_value(expected).unwrap());
}

#[test]
fn analytic_rank_of_the_quartic() {
    let out = run(&["arank", "--s", "3", "--p", "2", "--n", "7", "--json"], &quartic_text(7));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["bias"], "1577/8192");
    let arank = json["arank"].as_f64().unwrap();
    assert!((arank - (8192f64 / 1577.0).log2()).abs() < 1e-9);
}

#[test]
fn degree_reports_both_computations() {
    let out = run(&["degree", "--p", "2", "--n", "1", "--json"], "1/4*x1");
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["degree"], 2);
    assert_eq!(json["by_derivatives"], 2);
}

#[test]
fn verification_suite_passes() {
    let out = run(&["verify", "gowers-props", "--p", "2", "--n", "4", "--seed", "7"], "");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("result: pass"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["no-such-command"], "").status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-suite"], "").status.code(), Some(2));
    assert_eq!(run(&["degree"], "1/2*x1").status.code(), Some(2));
    assert_eq!(run(&["degree", "--p", "4", "--n", "1"], "1/2*x1").status.code(), Some(2));
}

#[test]
fn exhausted_budgets_exit_with_three() {
    let out = run(&["arank", "--s", "3", "--p", "2", "--n", "7", "--budget", "100"], &quartic_text(7));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn failed_checks_exit_with_one() {
    let input = r#"{"target": "1/2*x1*x2*x3*x4", "s": 1, "polys": ["1/2*x1", "1/2*x2"]}"#;
    let out = run(&["witness-check", "--p", "2", "--n", "4", "--json"], input);
    assert_eq!(out.status.code(), Some(1));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["valid"], false);
}

#[test]
fn output_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.json");
    let out = run(&["eval", "--p", "3", "--n", "2", "--json", "--out", path.to_str().unwrap()], "1/9*x1^2*x2 + 2/3");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 9);
}

#[test]
fn input_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(&path, r#"{"p": 2, "n": 1, "exp": 2, "table": [0, 1]}"#).unwrap();
    let out = run(&["interpolate", "--input", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1/4*x1");
}
