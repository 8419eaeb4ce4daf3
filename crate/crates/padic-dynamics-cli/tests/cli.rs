//! End-to-end tests driving the compiled binary: spec files in, reports and
//! exit codes out.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn spec_file(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("experiment.spec");
    std::fs::write(&path, text).unwrap();
    path
}

fn padyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const LAMBDA_MU_HC: &str = "\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 5
mu = 1/5
domain = naturals

[command]
name = decide
property = hypercyclic
";

#[test]
fn decide_reports_the_verdict_with_rule_and_certificate() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(&dir, LAMBDA_MU_HC);
    let out = padyn(&["decide", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict: yes"), "{text}");
    assert!(text.contains("rule: lambda-mu-naturals-hc"), "{text}");
    assert!(text.contains("certificate:"), "{text}");
}

#[test]
fn records_format_carries_exact_norms() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(&dir, LAMBDA_MU_HC);
    let out = padyn(&[
        "decide",
        "--spec",
        spec.to_str().unwrap(),
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("verdict property=hypercyclic answer=yes rule=lambda-mu-naturals-hc"),
        "{text}"
    );
    assert!(
        text.contains("certificate kind=parameter-witness lambda-norm=p^-1 mu-norm=p^1"),
        "{text}"
    );
}

#[test]
fn composite_prime_is_rejected_with_its_line() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(&dir, &LAMBDA_MU_HC.replace("prime = 5", "prime = 4"));
    let out = padyn(&["decide", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("not a prime"), "{err}");
}

#[test]
fn zero_weight_is_rejected() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "\
[field]
prime = 5

[operator]
kind = unilateral-shift
period = [0/1]

[command]
name = decide
property = hypercyclic
",
    );
    let out = padyn(&["decide", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("zero weight"), "{}", stderr(&out));
}

#[test]
fn unknown_keys_are_reported() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        &LAMBDA_MU_HC.replace("property = hypercyclic", "property = hypercyclic\nbogus = 1"),
    );
    let out = padyn(&["decide", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("command.bogus"), "{err}");
    assert!(err.contains("unknown key"), "{err}");
}

#[test]
fn argv_and_spec_command_must_agree() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(&dir, LAMBDA_MU_HC);
    let out = padyn(&["orbit", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("`decide`"), "{err}");
    assert!(err.contains("`orbit`"), "{err}");
}

#[test]
fn missing_spec_is_an_error_for_non_selftest() {
    let out = padyn(&["decide"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--spec"), "{}", stderr(&out));
}

#[test]
fn witness_between_touching_balls_is_found_and_checked() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 5
mu = 1/5
domain = naturals

[command]
name = witness
center-u = 1:1/1
radius-u = -1
center-v = 2:1/1
radius-v = -1
n-max = 200
",
    );
    let out = padyn(&[
        "witness",
        "--spec",
        spec.to_str().unwrap(),
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("outcome status=found"), "{text}");
    assert!(text.contains("point vector="), "{text}");
    assert!(text.contains("image vector="), "{text}");
}

#[test]
fn hopeless_witness_search_is_inconclusive_exit_two() {
    let dir = TempDir::new().unwrap();
    // |lambda| = 1: orbit norms never decay, so neither screen can pass.
    let spec = spec_file(
        &dir,
        "\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 1
mu = 5
domain = naturals

[command]
name = witness
center-u = 1:1/1
radius-u = -3
center-v = 2:1/1
radius-v = -3
n-max = 30
",
    );
    let out = padyn(&["witness", "--spec", spec.to_str().unwrap(), "--format", "records"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("outcome status=not-found n-max=30"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn orbit_emits_one_step_per_power() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "\
[field]
prime = 5

[operator]
kind = unilateral-shift
period = [-1]

[command]
name = orbit
vector = 1:1/1 3:25/1
n-max = 5
",
    );
    let out = padyn(&["orbit", "--spec", spec.to_str().unwrap(), "--format", "records"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("step ")).count(), 6, "{text}");
    assert!(text.contains("step n=2 norm=1 vector=1:1/1"), "{text}");
    assert!(text.contains("step n=3 norm=0 vector=0"), "{text}");
}

#[test]
fn verify_criterion_passes_inside_the_yes_region() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 5
mu = 1/5
domain = naturals

[command]
name = verify-criterion
property = hypercyclic
depth = 10
basis-bound = 4
",
    );
    let out = padyn(&[
        "verify-criterion",
        "--spec",
        spec.to_str().unwrap(),
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("criterion property=hypercyclic pass=yes stages=10 basis-bound=4"),
        "{text}"
    );
    assert_eq!(text.lines().filter(|l| l.starts_with("stage ")).count(), 10, "{text}");
    assert!(text.lines().any(|l| l.starts_with("decay m=0 ")), "{text}");
}

#[test]
fn obstruct_certifies_the_dominant_scalar_branch() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(
        &dir,
        "\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 1
mu = 5
domain = integers

[command]
name = obstruct
vector = 0:1/1
n-max = 12
",
    );
    let out = padyn(&["obstruct", "--spec", spec.to_str().unwrap(), "--format", "records"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("obstruction branch=dominant-lambda critical=0 target=1 n-checked=12"),
        "{text}"
    );
    assert_eq!(text.lines().filter(|l| l.starts_with("step ")).count(), 13, "{text}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(&dir, LAMBDA_MU_HC);
    let r1 = dir.path().join("first.report");
    let r2 = dir.path().join("second.report");
    for (report, _) in [(&r1, 0), (&r2, 0)] {
        let out = padyn(&[
            "decide",
            "--spec",
            spec.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&r1).unwrap();
    let b = std::fs::read(&r2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn report_file_matches_records_stdout() {
    let dir = TempDir::new().unwrap();
    let spec = spec_file(&dir, LAMBDA_MU_HC);
    let report = dir.path().join("out.report");
    let out = padyn(&[
        "decide",
        "--spec",
        spec.to_str().unwrap(),
        "--format",
        "records",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), stdout(&out));
}

#[test]
fn bare_selftest_runs_the_suite() {
    let out = padyn(&["selftest", "--seed", "7", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("selftest: 9/9 checks passed"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 9, "{text}");
}

#[test]
fn out_of_range_budget_is_rejected() {
    let out = padyn(&["selftest", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("between 1 and 100"), "{}", stderr(&out));
}
