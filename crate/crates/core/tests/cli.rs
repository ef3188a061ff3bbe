//! Exit codes, formats and determinism of the command-line driver.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_centralizer-lab");
const GOLDEN: &str = r#"{"diag":[0,0],"roots":[1]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(BIN).args(args).env(key, value).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn parse_c(s: &str) -> (f64, f64) {
    let z = centralizer_lab::cli::io::parse_complex(s).unwrap();
    (z.re, z.im)
}

#[test]
fn check_passes_on_small_runs() {
    let out = run(&["check", "--n", "2", "--seed", "42", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["n"], 2);
    assert!(r["checks"].as_array().unwrap().len() > 40);
    assert!(r.get("wall_time_s").is_none());

    let out = run(&["check", "--n", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["check", "--n", "3", "--seed", "5", "--samples", "10"];
    let a = run_env(&args, "CENTRALIZER_LAB_THREADS", "1");
    let b = run_env(&args, "CENTRALIZER_LAB_THREADS", "3");
    let c = run(&args);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"n": 2, "colour": "blue"}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--config", bad.to_str().unwrap()],
        vec!["check", "--config", unknown.to_str().unwrap()],
        vec!["check", "--config", "/nonexistent/config.json"],
        vec!["check", "--n", "9"],
        vec!["check", "--n", "1"],
        vec!["check", "--samples", "0"],
        vec!["check", "--tol.bogus", "1e-3"],
        vec!["check", "--tol.eig", "-1"],
        vec!["check", "--tol.eig"],
        vec!["check", "--only", "nothing_like_this"],
        vec!["frobnicate"],
        vec!["flow", "--n", "2", "--point", r#"{"diag":[0,0],"roots":[-1]}"#],
        vec!["flow", "--n", "2", "--point", "{oops"],
        vec!["flow", "--n", "2", "--i", "2", "--point", GOLDEN],
        vec!["embed", "--n", "3", "--point", GOLDEN],
        vec!["cjl", "--n", "2", "--tol.fd_step", "1e-2"],
        vec!["check", "--n", "2", "--samples", "1", "--out", "/nonexistent-dir/report.json"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run_env(&["check", "--n", "2", "--samples", "1"], "CENTRALIZER_LAB_THREADS", "zero");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn tightened_threshold_fails_with_exit_1() {
    let out = run(&["check", "--n", "2", "--samples", "5", "--only", "gradient_fd", "--tol.gradient_fd", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(r["checks"][0]["tolerance"], 1e-30);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"n": 2, "seed": 9, "samples": 4, "only": ["linalg"], "tolerances": {"eig": 1e-9}}"#,
    )
    .unwrap();
    let r = json(&run(&["check", "--config", cfg.to_str().unwrap()]));
    assert_eq!(r["n"], 2);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["checks"].as_array().unwrap().len(), 4);
    let r = json(&run(&["check", "--config", cfg.to_str().unwrap(), "--n", "3"]));
    assert_eq!(r["n"], 3);
}

#[test]
fn flow_csv_reproduces_the_closed_form() {
    let out = run(&["flow", "--n", "2", "--point", GOLDEN, "--t", "0,0.5,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["t", "diag_1", "diag_2", "root_1", "F_1", "status"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let t = parse_c(&row[0]).0;
        let sech = 1.0 / t.cosh();
        assert!((parse_c(&row[1]).0 - t.tanh()).abs() < 1e-12);
        assert!((parse_c(&row[3]).0 - sech * sech).abs() < 1e-12);
        assert!((parse_c(&row[4]).0 - 1.0).abs() < 1e-12);
        assert_eq!(&row[5], "ok");
    }
    // t = 0 returns the input.
    assert!(parse_c(&rows[0][1]).0.abs() < 1e-14);
    assert!((parse_c(&rows[0][3]).0 - 1.0).abs() < 1e-14);
}

#[test]
fn flow_blow_up_is_marked_and_exits_1() {
    let out = run(&["flow", "--n", "2", "--point", GOLDEN, "--t", "0.5,0+1.5707963267948966j"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.contains("NotInGStar"), "{last}");
    assert!(text.lines().nth(1).unwrap().ends_with(",ok"));
}

#[test]
fn flow_json_and_sampled_start() {
    let out = run(&["flow", "--n", "3", "--seed", "4", "--i", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["i"], 2);
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);
    assert!(r["max_invariant_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn embed_reports_the_golden_image() {
    let out = run(&["embed", "--n", "2", "--point", GOLDEN]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["g"]["mod_scalar"], true);
    assert!(r["roundtrip_error"].as_f64().unwrap() <= 1e-8);
    let x = &r["x"];
    assert_eq!(x[0][1][0], 1.0);
    assert_eq!(x[1][0][0], 1.0);
    let g = &r["g"]["entries"];
    let off = g[0][1][0].as_f64().unwrap();
    assert!(off.abs() > 0.0);
    assert!((g[1][0][0].as_f64().unwrap() - off).abs() < 1e-12);
    assert!(g[0][0][0].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn cjl_reports_three_blocks() {
    let out = run(&["cjl", "--n", "2", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["command"], "cjl");
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["samples"], 20);
        assert!(c["max_deviation"].as_f64().unwrap() <= 1e-5);
    }
    let out = run(&["cjl", "--n", "4", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    for c in json(&out)["checks"].as_array().unwrap() {
        assert!(c["max_deviation"].as_f64().unwrap() <= 1e-4);
    }
}

#[test]
fn out_flag_and_csv_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "check", "--n", "2", "--samples", "3", "--only", "linalg", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(Path::new(&path)).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("name,module,max_deviation"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn timings_are_opt_in() {
    let r = json(&run(&["check", "--n", "2", "--samples", "2", "--only", "linalg", "--timings"]));
    assert!(r["wall_time_s"].as_f64().is_some());
}
