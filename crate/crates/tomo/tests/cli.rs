//! End-to-end tests of the command-line interface and its exit-code
//! contract (0 success, 1 error/usage, 2 verdict vs --expect mismatch).

use std::process::{Command, Output};

fn tomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn section_of_the_unit_ball_prints_pi() {
    let out = tomo(&["section", "--body", &fixture("ball3.json"), "--xi", "0,0,1", "--t", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("3.14159265"), "got {text:?}");
}

#[test]
fn no_arguments_prints_usage_and_exits_1() {
    let out = tomo(&[]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stderr).unwrap() + &String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Usage"), "got {text:?}");
}

#[test]
fn unknown_flag_prints_usage_and_exits_1() {
    let out = tomo(&["section", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("Usage") || text.contains("unexpected"), "got {text:?}");
}

#[test]
fn detector_verdicts_and_expectation_exit_codes() {
    let square = fixture("square.json");
    let out = tomo(&["detect-ellipsoid", "--body", &square]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("not-ellipsoid"), "got {text}");

    // matching expectation keeps exit 0; a violated one exits 2
    let out = tomo(&["detect-ellipsoid", "--body", &square, "--expect", "not-ellipsoid"]);
    assert_eq!(out.status.code(), Some(0));
    let out = tomo(&["detect-ellipsoid", "--body", &square, "--expect", "ellipsoid"]);
    assert_eq!(out.status.code(), Some(2));

    let out = tomo(&["detect-ellipsoid", "--body", &fixture("ellipse.json"), "--expect", "ellipsoid"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_body_spec_names_the_field() {
    let dir = std::env::temp_dir().join("tomo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"type":"ellipsoid","center":[0,0]}"#).unwrap();
    let out = tomo(&["section", "--body", path.to_str().unwrap(), "--xi", "1,0", "--t", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("shape"), "error must name the missing field, got {text:?}");
}

#[test]
fn polyfit_verdicts_drive_exit_codes() {
    let out = tomo(&[
        "polyfit",
        "--body",
        &fixture("lpball4.json"),
        "--xi",
        "1,0",
        "--expect",
        "polynomial",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = tomo(&[
        "polyfit",
        "--body",
        &fixture("ball3.json"),
        "--xi",
        "0,0,1",
        "--expect",
        "polynomial",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn csv_profile_has_the_documented_columns() {
    let out = tomo(&[
        "section",
        "--body",
        &fixture("ellipse.json"),
        "--xi",
        "1,0",
        "--grid",
        "16",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("xi_1,xi_2,t,A,err\n"), "got {text}");
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn monte_carlo_outputs_are_seed_deterministic() {
    let args = [
        "section",
        "--body",
        &fixture("ball3.json"),
        "--xi",
        "0,0,1",
        "--t",
        "0.25",
        "--seed",
        "42",
    ];
    let a = tomo(&args);
    let b = tomo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_thread_cap_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_tomo"))
        .args(["section", "--body", &fixture("ball3.json"), "--xi", "0,0,1", "--t", "0"])
        .env("TOMO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("TOMO_THREADS"), "got {text:?}");
}
