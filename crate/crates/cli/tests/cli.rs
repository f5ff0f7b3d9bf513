//! End-to-end checks of the binary: formats, exit codes, caching, the
//! scripted play session and the bench matrix.

use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gp-pursuit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn graph_json_gp5() {
    let out = run(&["graph", "--n", "5", "--k", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["edges"].as_array().unwrap().len(), 15);
}

#[test]
fn graph_adjlist_first_line() {
    let out = run(&["graph", "--n", "5", "--k", "2", "--format", "adj-list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text.lines().next().unwrap(), "a0: a1 a4 b0");
}

#[test]
fn graph_dot_is_deterministic() {
    let a = run(&["graph", "--n", "28", "--k", "8", "--format", "dot"]);
    let b = run(&["graph", "--n", "28", "--k", "8", "--format", "dot"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).matches(" -- ").count(), 84);
}

#[test]
fn bad_params_exit_2() {
    let out = run(&["graph", "--n", "5", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn budget_exhaustion_exit_3() {
    let out = run(&["copnumber", "--n", "28", "--k", "8", "--budget-gib", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_28_8() {
    let out = run(&["classify", "--n", "28", "--k", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("girth 7"));
    assert!(text.contains("SevenKOverI"));
    assert!(text.contains("i=2"));
}

#[test]
fn classify_11_4_not_family() {
    let out = run(&["classify", "--n", "11", "--k", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("KEqualsFour"));
    assert!(text.contains("TwoKPlusThree"));
    assert!(text.contains("family n=7k/i: no"));
}

#[test]
fn copnumber_petersen_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = run(&[
        "copnumber",
        "--n",
        "5",
        "--k",
        "2",
        "--cache-dir",
        cache,
        "--json",
    ]);
    assert!(first.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&first).as_str()).unwrap();
    assert_eq!(v["results"]["cop_number"], 3);
    assert_eq!(v["table_cache_hit"], false);

    let second = run(&[
        "copnumber",
        "--n",
        "5",
        "--k",
        "2",
        "--cache-dir",
        cache,
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&second).as_str()).unwrap();
    assert_eq!(v["results"]["cop_number"], 3);
    assert_eq!(v["table_cache_hit"], true);
}

#[test]
fn copnumber_gp28_8_is_4_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "copnumber",
        "--n",
        "28",
        "--k",
        "8",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&out).as_str()).unwrap();
    assert_eq!(v["results"]["cop_number"], 4);
    assert_eq!(v["results"]["assumed_upper_bound"], false);
    let levels = v["results"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    assert_eq!(levels[2]["cops_win"], false);
    assert_eq!(levels[3]["cops_win"], true);
}

#[test]
fn verify_figures_and_counts_pass() {
    let out = run(&["verify", "--n", "42", "--k", "6", "--lemma", "figures"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verified"));

    let out = run(&[
        "verify",
        "--n",
        "42",
        "--k",
        "6",
        "--lemma",
        "lemma1",
        "--scope",
        "sample",
        "--samples",
        "20000",
    ]);
    assert!(out.status.success());
}

#[test]
fn verify_rejects_non_family() {
    let out = run(&["verify", "--n", "11", "--k", "4", "--lemma", "lemma1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scripted_play_session() {
    let mut child = bin()
        .args(["play", "--n", "28", "--k", "8", "--cops", "3", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"a0 a14 b7\na1 a14 b7\na99 a1 a2\nnot a move\nquit\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("robber places on"));
    assert!(text.contains("robber moves to"));
    // Malformed inputs re-prompt rather than abort.
    assert!(text.contains("try again"));
    let json_start = text.find("{\n").expect("json report");
    let v: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(v["results"]["outcome"], "quit");
    assert!(v["results"]["transcript"].as_array().unwrap().len() >= 3);
}

#[test]
fn play_optimal_robber_on_petersen() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = bin()
        .args([
            "play",
            "--n",
            "5",
            "--k",
            "2",
            "--cops",
            "3",
            "--robber",
            "optimal",
            "--cache-dir",
            dir.path().to_str().unwrap(),
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"a0 a2 b1\npass\nquit\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("robber places on"));
    assert!(text.contains("robber moves to") || text.contains("session over"));
}

#[test]
fn play_paper_robber_requires_family_graph() {
    let out = run(&[
        "play", "--n", "5", "--k", "2", "--cops", "3", "--robber", "paper",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_small_csv_is_consistent() {
    let out = run(&["bench", "--suite", "small"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("n,k,c,symmetry,threads"));
    // Same (n,k,c): identical cops_win across symmetry, identical checksum
    // across thread counts.
    let mut rows: Vec<Vec<String>> = Vec::new();
    for line in lines {
        rows.push(line.split(',').map(|s| s.to_string()).collect());
    }
    assert!(!rows.is_empty());
    for window in rows.chunks(2) {
        if let [one, many] = window {
            // consecutive rows differ only in thread count
            assert_eq!(one[..4], many[..4]);
            assert_eq!(one[10], many[10], "checksum must not depend on workers");
        }
    }
    for row in &rows {
        let same_key: Vec<&Vec<String>> = rows
            .iter()
            .filter(|r| r[0] == row[0] && r[1] == row[1] && r[2] == row[2])
            .collect();
        assert!(
            same_key.iter().all(|r| r[9] == row[9]),
            "cops_win must not depend on symmetry"
        );
    }
}
