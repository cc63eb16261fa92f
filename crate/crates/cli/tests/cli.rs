//! End-to-end checks of the binary: exit codes, document shapes, and
//! byte-determinism for fixed config + seed.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-dynamics"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn analyze_full_shift_exits_zero() {
    let out = run(&["analyze", "--p", "5", "--q", "2", "--k", "2", "--theta", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "full-shift-chaos");
    assert_eq!(doc["kappa"], 2);
    assert_eq!(doc["tau"], 1);
    assert_eq!(doc["incidence"], serde_json::json!([[1, 1], [1, 1]]));
    assert_eq!(doc["contraction"]["expected_exponent"], -1);
    assert!(doc["witnesses"]["scaling"]["per_ball"].is_array());
}

#[test]
fn analyze_unique_attractor_exits_zero() {
    let out = run(&["analyze", "--p", "7", "--q", "3", "--k", "2", "--theta", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "unique-attractor");
}

#[test]
fn analyze_inconclusive_exits_two() {
    let out = run(&["analyze", "--p", "5", "--q", "2", "--k", "10", "--theta", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "inconclusive");
    assert_eq!(doc["condition_holds"], false);
}

#[test]
fn invalid_theta_exits_one() {
    let out = run(&["analyze", "--p", "5", "--q", "2", "--k", "2", "--theta", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn one_plus_theta_form_is_accepted() {
    let out = run(&[
        "analyze", "--p", "5", "--q", "2", "--k", "2", "--theta", "1+5^1*1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["t"], 1);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "analyze", "--p", "7", "--q", "2", "--k", "3", "--theta", "8", "--seed", "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let sweep_args = [
        "sweep", "--p", "5", "--q", "2", "--k", "2", "--t-max", "2", "--format", "csv",
    ];
    let a = run(&sweep_args);
    let b = run(&sweep_args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn periodic_point_document() {
    let out = run(&[
        "periodic", "--p", "5", "--q", "2", "--k", "2", "--theta", "6", "--word", "1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["word"], serde_json::json!([1, 2]));
    // repelling 2-cycle: |(f^2)'| = p^2
    assert_eq!(doc["multiplier_norm_exponent"], 2);
    assert!(doc["residual_bounded_by_exponent"].as_i64().unwrap() >= 32);
}

#[test]
fn julia_counts_match_full_shift() {
    let out = run(&[
        "julia", "--p", "5", "--q", "2", "--k", "2", "--theta", "6", "--depth", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["cylinders"].as_array().unwrap().len(), 16);
    assert_eq!(doc["cylinder_radius_exponent"], 5);
}

#[test]
fn itinerary_reports_escape_index() {
    // the ball center is not in the Julia set; its orbit leaves X
    let out = run(&[
        "itinerary", "--p", "5", "--q", "2", "--k", "2", "--theta", "6", "--point", "9",
        "--length", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert!(doc["word"].is_null());
    assert_eq!(doc["escaped_at"], 1);
    // a point outside X entirely is a usage error
    let out = run(&[
        "itinerary", "--p", "5", "--q", "2", "--k", "2", "--theta", "6", "--point", "1",
        "--length", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gibbs_check_passes_and_writes_file() {
    let dir = std::env::temp_dir().join("padic-dynamics-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gibbs.json");
    let out = run(&[
        "gibbs-check", "--p", "5", "--q", "3", "--k", "2", "--coupling", "5", "--levels", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["all_hold"], true);
    assert!(doc["fields"].as_array().unwrap().len() >= 1);
    std::fs::remove_file(&path).ok();
}
