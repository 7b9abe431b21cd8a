mod common;

use std::process::{Command, Output};

use serde_json::Value;

fn qkrylov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkrylov"))
        .args(args)
        .env("QKRYLOV_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("cpu_seconds");
    v
}

#[test]
fn random_solve_reports_json_and_is_deterministic() {
    let args = ["solve", "--random", "n=8", "m=2", "--method", "glqfom", "--tol", "1e-10", "--seed", "5"];
    let first = qkrylov(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let v = json_of(&first);
    assert_eq!(v["method"], "glqfom");
    assert_eq!(v["dimensions"], serde_json::json!([8, 2]));
    assert_eq!(v["converged"], true);
    assert!(v["rr"].as_f64().unwrap() <= 1e-10);
    let second = qkrylov(&args);
    assert_eq!(without_timing(json_of(&second)), without_timing(v));
}

#[test]
fn matrix_market_solve_in_both_formulations() {
    let path = common::data_path("west0067_substitute.mtx");
    let path = path.to_str().unwrap();
    for (method, dims) in [("glqgmres", [67, 3]), ("glgmres-real", [268, 12]), ("qgmres-stacked", [201, 1])] {
        let out = qkrylov(&["solve", "--matrix", path, "--m", "3", "--method", method]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        let v = json_of(&out);
        assert_eq!(v["dimensions"], serde_json::json!(dims), "{method}");
        assert!(v["rr"].as_f64().unwrap() < 1e-6, "{method}");
    }
}

#[test]
fn bench_writes_a_table_and_history() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("bench.csv");
    let hist = dir.path().join("hist.csv");
    let out = qkrylov(&[
        "bench",
        "--random",
        "n=10",
        "m=2",
        "--method",
        "glqgmres,glgmres-real",
        "--out",
        table.to_str().unwrap(),
        "--history",
        hist.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,dimension,it,cpu,rr,converged,timing_comparable");
    assert!(lines[1].starts_with("glqgmres,\"[10,2]\","));
    assert!(lines[2].starts_with("glgmres-real,\"[40,8]\","));
    let h = std::fs::read_to_string(&hist).unwrap();
    assert!(h.starts_with("method,iteration,rr\nglqgmres,0,1e0\n"));
}

#[test]
fn sylvester_reports_solution_error() {
    let out = qkrylov(&["sylvester", "--random", "n=12", "m=6", "--tol", "1e-10", "--method", "glqfom"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["rr"].as_f64().unwrap() <= 1e-8);
    assert!(v["solution_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["coefficient_field"], "real");
}

#[test]
fn deblur_improves_the_image_and_writes_pngs() {
    let dir = tempfile::tempdir().unwrap();
    let out_json = dir.path().join("restored.json");
    let out = qkrylov(&["deblur", "--blur", "uniform:s=4", "--tol", "1e-2", "--out", out_json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("PSNR SSIM CPU RR\n"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_json).unwrap()).unwrap();
    let img = &v["image"];
    let gain = img["restored"]["psnr"].as_f64().unwrap() - img["blurred"]["psnr"].as_f64().unwrap();
    assert!(gain >= 3.0, "{gain}");
    assert!(dir.path().join("restored.png").exists());
    assert!(dir.path().join("restored.blurred.png").exists());
}

#[test]
fn nonconvergence_and_errors_have_distinct_exit_codes() {
    let stalled = qkrylov(&["solve", "--random", "n=20", "m=2", "--tol", "1e-12", "--maxit", "2"]);
    assert_eq!(stalled.status.code(), Some(2));
    assert_eq!(json_of(&stalled)["status"], "max-iter-exceeded");

    let missing = qkrylov(&["solve", "--matrix", "/nonexistent/a.mtx"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/a.mtx"));

    let stacked_sylvester = qkrylov(&["sylvester", "--random", "n=4", "m=2", "--method", "qgmres-stacked"]);
    assert_eq!(stacked_sylvester.status.code(), Some(1));

    let bad_flag = qkrylov(&["solve", "--random", "n=4", "--tol", "abc"]);
    assert_ne!(bad_flag.status.code(), Some(0));
}
