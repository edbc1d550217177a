use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use seqham::graph::Graph;
use seqham::ham::validate_cycle;
use seqham::io::{parse_graph, parse_int_line, write_graph};

fn seqham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqham")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&seqham(&["--help"])), 0);
    assert_eq!(code(&seqham(&["--version"])), 0);
    assert_eq!(code(&seqham(&[])), 1);
    assert_eq!(code(&seqham(&["gen", "--n", "5"])), 1);
    assert_eq!(code(&seqham(&["sweep", "--kind", "nonsense", "--n", "5", "--grid", "0.5", "--trials", "1", "--seed", "1"])), 1);
    // the seed is mandatory for sweeps
    assert_eq!(code(&seqham(&["sweep", "--kind", "hamiltonicity", "--n", "5", "--grid", "0.5", "--trials", "1"])), 1);
    let bad_key = seqham(&[
        "sweep", "--kind", "ordered", "--n", "50", "--grid", "0.5", "--trials", "1", "--seed", "1", "--params", "k=2",
    ]);
    assert_eq!(code(&bad_key), 1);
    assert_eq!(code(&seqham(&["solve", "--graph", "/nonexistent/graph.txt"])), 1);
}

#[test]
fn gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let gpath = dir.path().join("g.txt");
    let hpath = dir.path().join("h.txt");
    let out = seqham(&["gen", "--n", "30", "--p", "0.4", "--seed", "5", "--out", path_str(&gpath)]);
    assert_eq!(code(&out), 0);
    let g = parse_graph(&fs::read_to_string(&gpath).unwrap()).unwrap();
    assert_eq!(g.n(), 30);
    let out = seqham(&["solve", "--graph", path_str(&gpath), "--solver", "posa", "--out", path_str(&hpath)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let h = parse_int_line(&fs::read_to_string(&hpath).unwrap()).unwrap();
    assert!(validate_cycle(&g, &h, None));
}

#[test]
fn unsolvable_instance_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let gpath = dir.path().join("path.txt");
    write_graph(&Graph::path(6), &gpath).unwrap();
    let out = seqham(&["solve", "--graph", path_str(&gpath)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn sweep_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = seqham(&[
            "sweep", "--kind", "edge-pattern", "--n", "7", "--grid", "0.3:0.6:0.1", "--trials", "30", "--seed",
            "42", "--params", "k=2", "--out", path_str(p),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("point,trials,successes,p_hat,stderr,stat,errors"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn count_prints_exact_values() {
    let out = seqham(&["count", "--n", "4", "--m", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    // 1 + 3 + 5 permutations of [4] with at most two inversions
    assert!(text.contains("count_inversion_bounded=9\n"), "{text}");
}

#[test]
fn ordered_on_sampled_instance() {
    let dir = tempfile::tempdir().unwrap();
    let hpath = dir.path().join("h.txt");
    let rpath = dir.path().join("report.txt");
    let out = seqham(&[
        "ordered", "--n", "300", "--p", "0.04", "--s0", "5,200,17,90", "--seed", "1", "--retries", "3", "--out",
        path_str(&hpath), "--report", path_str(&rpath),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let h = parse_int_line(&fs::read_to_string(&hpath).unwrap()).unwrap();
    assert_eq!(h.len(), 300);
    assert!(fs::read_to_string(&rpath).unwrap().contains("stage="));
}
