//! End-to-end tests of the `qsteer` binary: output contracts, exit codes,
//! and the optimize/visibility round trip through direction-set files.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsteer"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsteer-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir creates");
    dir.join(name)
}

#[test]
fn bound_prints_fixed_point_human_output() {
    let out = run(&[
        "bound",
        "--family",
        "chained",
        "--n",
        "4",
        "--dirs",
        "preset:chained-eq6-4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("C = 4.828427"), "got: {text}");
    assert!(text.contains("argmax signs:"), "got: {text}");
}

#[test]
fn unknown_preset_is_a_validation_error() {
    let out = run(&[
        "bound",
        "--family",
        "chained",
        "--n",
        "3",
        "--dirs",
        "preset:no-such-set",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("preset"), "got: {}", stderr(&out));
}

#[test]
fn visibility_json_carries_the_reference_triple() {
    let out = run(&[
        "visibility",
        "--family",
        "chained",
        "--n",
        "4",
        "--dirs",
        "preset:chained-eq6-4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let pi_8 = std::f64::consts::PI / 8.0;
    assert!((v["c"].as_f64().unwrap() - 2.0 / pi_8.tan()).abs() < 1e-9);
    assert!((v["q"].as_f64().unwrap() - 8.0 * pi_8.cos()).abs() < 1e-9);
    assert!((v["v"].as_f64().unwrap() - 1.0 / (4.0 * pi_8.sin())).abs() < 1e-9);
    assert_eq!(v["argmax_signs"].as_array().unwrap().len(), 4);
}

#[test]
fn scan_csv_has_contract_header_and_full_grid() {
    let out = run(&[
        "scan",
        "--family",
        "chained",
        "--n",
        "4",
        "--dirs",
        "preset:paper-eq15",
        "--grid",
        "5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "theta,v_linear,v_chained");
    assert_eq!(lines.len(), 6);
    let first: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
    let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert_eq!(last[0], FRAC_PI_2);
    for line in &lines[1..] {
        for field in line.split(',') {
            let x: f64 = field.parse().expect("numeric field");
            assert!(x.is_finite());
        }
    }
}

#[test]
fn optimize_roundtrips_through_a_direction_file() {
    let path = temp_path("optimized-pair.json");
    let out = run(&[
        "optimize",
        "--family",
        "chained",
        "--n",
        "2",
        "--restarts",
        "4",
        "--max-iters",
        "300",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let opt = json(&out);
    let v_opt = opt["report"]["v"].as_f64().unwrap();
    assert!(v_opt <= 1.0 / 2.0_f64.sqrt() + 1e-6);

    let vis = run(&[
        "visibility",
        "--family",
        "chained",
        "--n",
        "2",
        "--dirs",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(vis.status.success());
    let v_vis = json(&vis)["v"].as_f64().unwrap();
    assert!(
        (v_vis - v_opt).abs() <= 1e-12,
        "optimize reported {v_opt}, file reloads to {v_vis}"
    );
}

#[test]
fn repeated_axes_warn_but_still_compute() {
    let out = run(&[
        "bound",
        "--family",
        "chained",
        "--n",
        "2",
        "--dirs",
        r#"{"n": 2, "directions": [[0, 0, 1], [0, 0, 1]]}"#,
    ]);
    assert!(out.status.success());
    assert!(
        stderr(&out).contains("repeats a measurement axis"),
        "got: {}",
        stderr(&out)
    );
}

#[test]
fn vanishing_quantum_value_exits_two() {
    let out = run(&[
        "visibility",
        "--family",
        "linear",
        "--n",
        "2",
        "--dirs",
        r#"{"n": 2, "directions": [[1, 0, 0], [1, 0, 0]]}"#,
        "--state",
        "generalized-werner",
        "--theta",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn verify_report_is_machine_readable_and_flags_known_mismatches() {
    let path = temp_path("verify-report.json");
    let out = run(&[
        "verify-paper",
        "--skip-optimizer",
        "--report",
        path.to_str().unwrap(),
    ]);
    // Known reference mismatches keep this nonzero by design.
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("checks passed"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = report.as_array().expect("report is an array");
    assert!(checks.len() > 40);
    for c in checks {
        assert!(c["name"].is_string());
        assert!(c["expected"].is_number());
        assert!(c["observed"].is_number());
        assert!(c["tolerance"].is_number());
        assert!(c["pass"].is_boolean());
    }
    // The six-setting window checks agree with the pinned references.
    for c in checks {
        let name = c["name"].as_str().unwrap();
        if name.contains("paper-eq17") {
            assert!(c["pass"].as_bool().unwrap(), "{name} unexpectedly fails");
        }
    }
    // Every failure is a window check on the four- or ten-setting sets.
    for c in checks {
        let name = c["name"].as_str().unwrap();
        if !c["pass"].as_bool().unwrap() {
            assert!(
                (name.contains("paper-eq15") || name.contains("paper-eq18-0"))
                    && (name.contains("threshold") || name.contains("crossover")),
                "unexpected failing check: {name}"
            );
        }
    }
}

#[test]
fn help_and_version_exit_clean() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert!(stdout(&run(&["--help"])).contains("Usage"));
}

#[test]
fn missing_required_arguments_exit_one() {
    let out = run(&["bound"]);
    assert_eq!(out.status.code(), Some(1));
}
