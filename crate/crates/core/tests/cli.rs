//! The built binary run against the fixtures.

use std::path::PathBuf;
use std::process::Command;

use lprevise::cli::ReviseJson;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str], file: &str) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lprevise"))
        .args(args)
        .arg(fixture(file))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn revise_prints_both_car_revisions() {
    let (code, out, _) = run(&["revise"], "fw1.lp");
    assert_eq!(code, 0);
    assert!(out.contains("Θ = {phi1-*(c1)}"), "{out}");
    assert!(out.contains("Θ = {phi2+*(c1)}"), "{out}");
    assert!(out.contains("r(X) :- c(X), not b(X), X != c1."), "{out}");
}

#[test]
fn revise_json_round_trips() {
    let (code, out, _) = run(&["revise", "--json", "--all"], "nonminimal.lp");
    assert_eq!(code, 0);
    let doc: ReviseJson = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.revisions.len(), 1);
    assert!(doc
        .non_minimal
        .contains(&vec!["b1+*".to_string(), "t1-*".to_string()]));
}

#[test]
fn trace_starts_with_the_new_rule() {
    let (code, out, _) = run(&["trace"], "fw1.lp");
    assert_eq!(code, 0);
    let first = out.lines().nth(1).unwrap();
    assert_eq!(first, "rc(:- r(c1)) Δ={}");
    assert!(out.contains("1.1.1 dr(c(c1)) Δ={not r(c1)}"), "{out}");
}

#[test]
fn consistent_addition_has_a_single_empty_revision() {
    let (code, out, _) = run(&["trace"], "consistent.lp");
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("rc(")).count(), 1);
    assert!(out.contains("Θ = {}"), "{out}");
}

#[test]
fn models_and_abduce() {
    let (code, out, _) = run(&["models"], "fw1.lp");
    assert_eq!(code, 1, "the new rule makes the program inconsistent");
    assert!(out.contains("no stable models"));
    let (code, out, _) = run(&["models", "--abduce"], "tau1.lp");
    assert_eq!(code, 0);
    assert!(out.contains("Θ = {phi1-*(c1)}"), "{out}");
}

#[test]
fn ground_lists_instances() {
    let (code, out, _) = run(&["ground"], "fw1.lp");
    assert_eq!(code, 0);
    assert!(out.contains("r(c2) :- c(c2), not b(c2)."), "{out}");
}

#[test]
fn check_agrees_on_fixtures() {
    for f in ["fw1.lp", "cyclic.lp", "support.lp"] {
        let (code, out, _) = run(&["check"], f);
        assert_eq!(code, 0, "{f}: {out}");
        assert!(out.contains("agreement: true"));
    }
}

#[test]
fn exit_codes_for_failures() {
    let (code, out, _) = run(&["revise"], "unrevisable.lp");
    assert_eq!(code, 1);
    assert!(out.contains("unrevisable"));
    let (code, _, err) = run(&["revise"], "missing.lp");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    let (code, _, err) = run(&["revise", "--step-budget", "3"], "cyclic.lp");
    assert_eq!(code, 2, "{err}");
}
