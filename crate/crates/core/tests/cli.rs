//! Drives the command-line tool through a full generate / bench / compare /
//! report cycle.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxsolve")).args(args).output().expect("spawn boxsolve")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_bench_compare_report() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for root in [&a, &b] {
        let out = run(&["gen", "kuramoto", "-n", "3", "--count", "4", "--seed", "10", "--out", path(root)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let inst = a.join("parametric/kuramoto-n3/instances/00002");
    let sys = fs::read_to_string(inst.join("sys.txt")).unwrap();
    assert!(sys.contains("meta seed 12"));
    assert_eq!(sys, fs::read_to_string(b.join("parametric/kuramoto-n3/instances/00002/sys.txt")).unwrap());

    let cfg = dir.path().join("bfs.toml");
    fs::write(&cfg, "node_select = \"bfs\"\nbisector = \"rr\"\n").unwrap();
    assert!(run(&["bench", path(&a)]).status.success());
    assert!(run(&["bench", path(&b), "--config", path(&cfg), "--jobs", "2"]).status.success());
    assert!(inst.join("output.txt").is_file() && inst.join("solution.txt").is_file());

    let cmp = run(&["compare", path(&a), path(&b)]);
    let text = String::from_utf8_lossy(&cmp.stdout);
    assert!(cmp.status.success(), "{text}");
    assert!(text.contains("instances 4") && text.contains("discrepancy 0"), "{text}");

    let report_dir = dir.path().join("report");
    let rep = run(&["report", path(&a.join("records.csv")), "--out", path(&report_dir)]);
    assert!(rep.status.success());
    assert!(String::from_utf8_lossy(&rep.stdout).contains("runs: 4"));
    let bins = fs::read_to_string(report_dir.join("bins.csv")).unwrap();
    assert!(bins.starts_with("bin,count\n<=1,4\n"), "{bins}");
}

#[test]
fn solve_prints_boxes_and_exit_codes_follow_the_failure_kind() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("circle.txt");
    fs::write(&f, "vars x, y\nbox [-2, 2]^2\neq x^2 + y^2 - 1\neq x - y\n").unwrap();
    let out = run(&["solve", path(&f), "--probe"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("certified ")).count(), 2, "{text}");

    assert_eq!(run(&["solve", path(&f), "--bisector", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "vars x\neq x +\n").unwrap();
    assert_ne!(run(&["solve", path(&bad)]).status.code(), Some(0));
}

#[test]
fn flash_template_needs_no_output_dir() {
    let out = run(&["gen", "flash", "--template"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("psat"));
    assert_eq!(run(&["gen", "kuramoto"]).status.code(), Some(1));
}
