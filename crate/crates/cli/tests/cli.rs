use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nsaa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsaa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, extra: &str) -> String {
    let text = format!(
        "name = desk\n\
         problem.kind = lasso\n\
         problem.m = 20\n\
         problem.n = 60\n\
         problem.seed = 2\n\
         run.max_iter = 5000\n\
         output.trace = out/trace.csv\n\
         output.summary = out/summary.txt\n\
         {extra}"
    );
    let path = dir.join("desk.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn field<'a>(block: &'a str, key: &str) -> &'a str {
    block
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {block}"))
}

#[test]
fn run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "aa.enabled = true\naa.memory = 5\n");
    let out = nsaa(&["run", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(field(&stdout, "status"), "converged");

    let trace = fs::read_to_string(dir.path().join("out/trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some(nsaa::harness::TRACE_HEADER));
    let last = lines.last().unwrap();
    let resid: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(resid <= 1e-10);

    let summary = fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    assert_eq!(summary, stdout);
}

#[test]
fn overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = nsaa(&["run", &cfg, "--max-iter", "3", "--tol", "1e-3", "--seed", "9"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let iters: usize = field(&stdout, "iterations").parse().unwrap();
    assert!(iters <= 3);
}

#[test]
fn sweep_writes_one_trace_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = nsaa(&["sweep", &cfg, "--memory", "2,4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = stdout.split("\n\n").map(|b| field(b, "name")).collect();
    assert_eq!(names, ["desk_base", "desk_m2", "desk_m4"]);
    for label in ["base", "m2", "m4"] {
        assert!(dir.path().join(format!("out/trace_{label}.csv")).exists());
    }
}

#[test]
fn gen_lasso_writes_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("inst");
    let out = nsaa(&["gen-lasso", "10", "30", "5", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let a = fs::read_to_string(out_dir.join("A.txt")).unwrap();
    assert_eq!(a.lines().count(), 10);
    assert!(a.lines().all(|l| l.split_whitespace().count() == 30));
    let x: Vec<f64> = fs::read_to_string(out_dir.join("x_true.txt"))
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(x.iter().filter(|v| **v != 0.0).count(), 3);
    assert_eq!(fs::read_to_string(out_dir.join("y.txt")).unwrap().lines().count(), 10);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "aa.memory = 0\naa.enabled = true\n");
    let out = nsaa(&["run", &cfg]);
    assert!(!out.status.success());
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    assert!(!nsaa(&["run", "/nonexistent/config"]).status.success());
    assert!(!nsaa(&["sweep", &cfg, "--memory", "0"]).status.success());
}
