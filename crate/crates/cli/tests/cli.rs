//! End-to-end runs of the `coinwalk` binary.

use std::path::Path;
use std::process::{Command, Output};

use coinwalk_cli::{COLUMNS, EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_PARTIAL};

fn coinwalk(args: &[&str], spec: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coinwalk"))
        .args(args)
        .arg("--spec")
        .arg(spec)
        .env_remove("COINWALK_JOBS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn csv_rows(bytes: &[u8]) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(bytes);
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), COLUMNS);
    r.records().map(Result::unwrap).collect()
}

const ANALYZE: &str = r#"{"kind": "analyze", "seed": 3, "graphs": [
    {"family": "complete", "n": 10},
    {"family": "edges", "n": 3, "edges": [[0, 1], [1, 2]]},
    {"family": "power_law", "n": 500, "gamma": 2.5, "d": 4, "m": "sqrt_nd"}]}"#;

#[test]
fn analyze_csv_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "a.json", ANALYZE);
    let csv_out = coinwalk(&["analyze"], &spec);
    assert_eq!(csv_out.status.code(), Some(EXIT_OK));
    let json_out = coinwalk(&["analyze", "--format", "json"], &spec);
    assert_eq!(json_out.status.code(), Some(EXIT_OK));

    let rows = csv_rows(&csv_out.stdout);
    let objects: Vec<serde_json::Value> = serde_json::from_slice(&json_out.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(objects.len(), 3);
    for (row, obj) in rows.iter().zip(&objects) {
        for (col, cell) in COLUMNS.iter().zip(row.iter()) {
            let v = &obj[*col];
            match v {
                serde_json::Value::Null => assert_eq!(cell, "", "{col}"),
                serde_json::Value::String(s) => assert_eq!(cell, s, "{col}"),
                serde_json::Value::Bool(b) => assert_eq!(cell, b.to_string(), "{col}"),
                serde_json::Value::Number(x) => {
                    assert_eq!(cell.parse::<f64>().unwrap(), x.as_f64().unwrap(), "{col}")
                }
                other => panic!("{col}: {other}"),
            }
        }
    }
    let i = COLUMNS.iter().position(|&c| c == "sum_pi_sq").unwrap();
    assert_eq!(rows[1][i].parse::<f64>().unwrap(), 0.375);
}

#[test]
fn out_file_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "a.json", ANALYZE);
    let out = dir.path().join("rows.csv");
    let status = coinwalk(&["analyze", "--out", out.to_str().unwrap(), "--seed", "11"], &spec);
    assert_eq!(status.status.code(), Some(EXIT_OK));
    assert!(status.stdout.is_empty());
    let with_override = std::fs::read(&out).unwrap();
    let baseline = coinwalk(&["analyze"], &spec).stdout;
    assert_ne!(with_override, baseline);

    let reseeded = write(dir.path(), "b.json", &ANALYZE.replace("\"seed\": 3", "\"seed\": 11"));
    assert_eq!(coinwalk(&["analyze"], &reseeded).stdout, with_override);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_gamma = write(
        dir.path(),
        "g.json",
        r#"{"kind": "analyze", "graphs": [{"family": "power_law", "n": 100, "gamma": 1.5, "d": 5, "m": 20}]}"#,
    );
    let out = coinwalk(&["analyze"], &bad_gamma);
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma must exceed 2"));

    let typo = write(
        dir.path(),
        "t.json",
        r#"{"kind": "analyze", "graphs": [{"family": "power_law", "n": 100, "gama": 2.5, "d": 5, "m": 20}]}"#,
    );
    let out = coinwalk(&["analyze"], &typo);
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gama"));

    let wrong_kind = write(dir.path(), "k.json", ANALYZE);
    assert_eq!(coinwalk(&["simulate"], &wrong_kind).status.code(), Some(EXIT_INVALID));
}

#[test]
fn io_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(coinwalk(&["analyze"], &dir.path().join("missing.json")).status.code(), Some(EXIT_IO));
    let spec = write(dir.path(), "a.json", ANALYZE);
    let bad_out = dir.path().join("no/such/dir/rows.csv");
    assert_eq!(coinwalk(&["analyze", "--out", bad_out.to_str().unwrap()], &spec).status.code(), Some(EXIT_IO));
}

#[test]
fn failed_rows_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "p.json",
        r#"{"kind": "analyze", "graphs": [
            {"family": "random_regular", "n": 5, "r": 3},
            {"family": "complete", "n": 4}]}"#,
    );
    let out = coinwalk(&["analyze"], &spec);
    assert_eq!(out.status.code(), Some(EXIT_PARTIAL));
    let rows = csv_rows(&out.stdout);
    let status = COLUMNS.iter().position(|&c| c == "status").unwrap();
    assert_eq!(&rows[0][status], "error");
    assert_eq!(&rows[1][status], "ok");
}

#[test]
fn edge_list_relative_to_spec() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("star.txt"), "# star\n0 1\n0 2\n0 3\n").unwrap();
    let spec = write(dir.path(), "e.json", r#"{"kind": "analyze", "graphs": [{"family": "edge_list", "path": "star.txt"}]}"#);
    let out = coinwalk(&["analyze"], &spec);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out.stdout);
    let i = COLUMNS.iter().position(|&c| c == "sum_pi_sq").unwrap();
    assert!((rows[0][i].parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn simulate_path_matches_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"kind": "simulate", "seed": 21, "graphs": [{"family": "edges", "n": 3, "edges": [[0, 1], [1, 2]]}],
            "sim": {"t": 800, "beta": 0.1, "replicates": 100000}}"#,
    );
    let out = coinwalk(&["simulate"], &spec);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let rows = csv_rows(&out.stdout);
    let col = |name: &str| rows[0][COLUMNS.iter().position(|&c| c == name).unwrap()].parse::<f64>().unwrap();
    assert!((col("mean_tau") - 300.0).abs() <= 3.0 * col("stderr_tau"));
    assert_eq!(col("predicted_tau"), 300.0);
}

#[test]
fn jobs_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "a.json", ANALYZE);
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_coinwalk"))
            .args(["analyze", "--spec"])
            .arg(&spec)
            .env("COINWALK_JOBS", jobs)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(EXIT_OK));
    assert_eq!(one.stdout, run("3").stdout);
}

#[test]
fn predict_accepts_sweep_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "w.json",
        r#"{"kind": "sweep", "grid": {"n": [1000, 100000], "gamma": [2.5, 3.0, 4.0], "d": 5}}"#,
    );
    let out = coinwalk(&["predict"], &spec);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 6);
    let regime = COLUMNS.iter().position(|&c| c == "regime").unwrap();
    let got: Vec<&str> = rows.iter().map(|r| &r[regime]).collect();
    assert_eq!(got, ["gamma_in_2_3", "gamma_in_2_3", "gamma_eq_3", "gamma_eq_3", "gamma_gt_3", "gamma_gt_3"]);
}
