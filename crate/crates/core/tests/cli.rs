//! End-to-end runs of the `pdcor` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> PathBuf {
    manifest_dir().join("data").join(name)
}

fn golden(name: &str) -> PathBuf {
    manifest_dir().join("tests").join("golden").join(name)
}

fn pdcor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdcor")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn assert_matches_golden(actual: &Value, expected: &Value) {
    let (a, e) = (actual.as_object().unwrap(), expected.as_object().unwrap());
    let mut ak: Vec<_> = a.keys().collect();
    let mut ek: Vec<_> = e.keys().collect();
    ak.sort();
    ek.sort();
    assert_eq!(ak, ek);
    for (k, ev) in e {
        let av = &a[k];
        match (av.as_f64(), ev.as_f64()) {
            (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-12, "{k}: {x} vs {y}"),
            _ => assert_eq!(av, ev, "{k}"),
        }
    }
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn dcor_on_maize_dissimilarities_matches_golden() {
    let o = pdcor(&[
        "dcor",
        "--dissimilarity",
        "--header",
        path(&data("maize_genetic.csv")),
        path(&data("maize_heterosis_reprinted.csv")),
    ]);
    assert_matches_golden(&stdout_json(&o), &read_json(&golden("dcor_maize.json")));
}

#[test]
fn pdcor_on_samples_matches_golden() {
    let o = pdcor(&[
        "pdcor",
        path(&golden("x.csv")),
        path(&golden("y.csv")),
        path(&golden("z.csv")),
    ]);
    assert_matches_golden(&stdout_json(&o), &read_json(&golden("pdcor_xyz.json")));
}

#[test]
fn csv_output_has_header_and_one_row() {
    let o = pdcor(&[
        "test",
        "--method",
        "mantel",
        "--dissimilarity",
        "--header",
        "--replicates",
        "99",
        "--output",
        "csv",
        path(&data("maize_genetic.csv")),
        path(&data("maize_heterosis_reprinted.csv")),
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("p_value"));
}

#[test]
fn test_subcommand_is_reproducible_across_workers() {
    let run = |workers: &str| {
        stdout_json(&pdcor(&[
            "test",
            "--method",
            "pdcov",
            "--replicates",
            "199",
            "--seed",
            "42",
            "--workers",
            workers,
            path(&golden("x.csv")),
            path(&golden("y.csv")),
            path(&golden("z.csv")),
        ]))
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a, b);
    let p = a["p_value"].as_f64().unwrap();
    assert!(p > 0.0 && p <= 1.0);
    assert_eq!(a["method"], "pdcov");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(pdcor(&[]).status.code(), Some(1));
    assert_eq!(pdcor(&["dcor", path(&golden("x.csv"))]).status.code(), Some(1));
    assert_eq!(
        pdcor(&["test", "--method", "pdcov", path(&golden("x.csv")), path(&golden("y.csv"))]).status.code(),
        Some(1)
    );
    assert_eq!(pdcor(&["dcor", "missing.csv", "missing.csv"]).status.code(), Some(1));
    assert_eq!(pdcor(&["--help"]).status.code(), Some(0));
}

#[test]
fn undefined_partial_correlation_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", "1\n2\n3\n4\n5\n6\n");
    let y = write(dir.path(), "y.csv", "2\n1\n4\n3\n6\n5\n");
    let o = pdcor(&["test", "--method", "pcor", path(&x), path(&y), path(&x)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("partial correlation undefined"));
}

#[test]
fn malformed_csv_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", "1,2\n3,4\n5,oops\n7,8\n9,10\n");
    let y = write(dir.path(), "y.csv", "1\n2\n3\n4\n5\n");
    let o = pdcor(&["dcor", path(&x), path(&y)]);
    assert_eq!(o.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(msg.contains("line 3") && msg.contains("column 2"), "{msg}");
}

#[test]
fn embed_writes_points_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let o = pdcor(&[
        "embed",
        "--header",
        "--points",
        path(&points),
        path(&data("maize_heterosis_reprinted.csv")),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sidecar = read_json(&points.with_extension("json"));
    assert!(sidecar["residual"].as_f64().unwrap() < 1e-8);
    assert!(sidecar["constant"].is_number());
    assert_eq!(sidecar["eigenvalues"].as_array().unwrap().len(), 7);
    let rows = std::fs::read_to_string(&points).unwrap();
    let mut lines = rows.lines().filter(|l| !l.trim().is_empty());
    assert!(lines.next().unwrap().starts_with("v1"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn bench_emits_rate_table() {
    let o = pdcor(&["bench", "--n", "10", "--sims", "4", "--replicates", "9", "--alpha", "0.1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("generator,n,alpha,method,rate,se,sims"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn select_reports_named_steps() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("a,b,resp,c\n");
    for i in 0..30 {
        let t = i as f64 / 3.0;
        let a = (t * 1.7).sin();
        let b = (t * 0.9).cos();
        let c = ((i * 7) % 11) as f64;
        body.push_str(&format!("{a},{b},{},{c}\n", b * b * 3.0 + 0.1 * a));
    }
    let file = write(dir.path(), "d.csv", &body);
    let json = stdout_json(&pdcor(&[
        "select",
        "--header",
        "--response",
        "resp",
        "--replicates",
        "99",
        "--max-steps",
        "1",
        path(&file),
    ]));
    assert_eq!(json["response"], "resp");
    assert_eq!(json["steps"][0]["name"], "b");
    assert_eq!(json["stopped_reason"], "max_steps");
}
