use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const WORKED: &str = "a b 1\na c 1\nb c 2\nb d 1\nc d 3\n";
const TREE: &str = "a b 2\nb c 1\nc d 3\n";

fn graph_file(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toppling")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn worked_graph_verifies() {
    let g = graph_file("worked.txt", WORKED);
    let out = run(&["verify-wilmes", "--graph", g.to_str().unwrap(), "--format", "json"]);
    let v = json(&out);
    let rows = v["conjecture"].as_array().unwrap();
    let triples: Vec<(u64, u64, bool)> = rows
        .iter()
        .map(|r| (r["lhs"].as_u64().unwrap(), r["rhs"].as_u64().unwrap(), r["match"].as_bool().unwrap()))
        .collect();
    assert_eq!(triples, [(6, 6, true), (9, 9, true), (4, 4, true)]);
    assert_eq!(v["coarse"]["1"], 6);
}

#[test]
fn detail_lists_partitions() {
    let g = graph_file("worked_detail.txt", WORKED);
    let out = run(&["verify-wilmes", "--graph", g.to_str().unwrap(), "--k", "2", "--detail", "--format", "json"]);
    let v = json(&out);
    let parts = v["partitions"].as_array().unwrap();
    assert_eq!(parts.len(), 5);
    let total: u64 = parts.iter().map(|p| p["maximal_superstables"].as_u64().unwrap()).sum();
    assert_eq!(total, 9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["cuts"]).status.code(), Some(1));
    assert_eq!(run(&["cuts", "--graph", "/nonexistent/graph.txt"]).status.code(), Some(2));
    let bad = graph_file("bad.txt", "a a 1\n");
    assert_eq!(run(&["cuts", "--graph", bad.to_str().unwrap()]).status.code(), Some(2));
    let g = graph_file("worked_codes.txt", WORKED);
    let g = g.to_str().unwrap();
    assert_eq!(run(&["betti", "--graph", g, "--divisor", "12"]).status.code(), Some(2));
    assert_eq!(run(&["verify-wilmes", "--graph", g, "--k", "0..5"]).status.code(), Some(2));
    assert_eq!(run(&["extension-cycle", "--extensions", "1,1"]).status.code(), Some(2));
}

#[test]
fn output_is_independent_of_jobs() {
    let g = graph_file("worked_jobs.txt", WORKED);
    let g = g.to_str().unwrap();
    let one = run(&["--jobs", "1", "verify-wilmes", "--graph", g, "--format", "json"]);
    let four = run(&["--jobs", "4", "verify-wilmes", "--graph", g, "--format", "json"]);
    assert_eq!(json(&one), json(&four));
    let one = run(&["--jobs", "1", "verify-wilmes", "--random", "4", "--seed", "9", "--format", "json"]);
    let four = run(&["--jobs", "4", "verify-wilmes", "--random", "4", "--seed", "9", "--format", "json"]);
    assert_eq!(json(&one), json(&four));
}

#[test]
fn exhaustive_corpus_matches() {
    let v = json(&run(&["verify-wilmes", "--exhaustive", "3:4", "--format", "json"]));
    assert_eq!(v["mismatches"], 0);
    assert!(!v["graphs"].as_array().unwrap().is_empty());
}

#[test]
fn cuts_of_worked_graph() {
    let g = graph_file("worked_cuts.txt", WORKED);
    let v = json(&run(&["cuts", "--graph", g.to_str().unwrap(), "--format", "json"]));
    let cuts = v["cuts"].as_array().unwrap();
    assert_eq!(cuts.len(), 6);
    assert!(cuts.iter().all(|c| c["betti_1"] == 1));
}

#[test]
fn linear_system_recovers_cut() {
    let g = graph_file("worked_ls.txt", WORKED);
    let v = json(&run(&["linear-system", "--graph", g.to_str().unwrap(), "--divisor", "0004", "--format", "json"]));
    assert_eq!(v["members"], serde_json::json!(["0004", "0130", "2020"]));
    assert_eq!(v["splittings"][0]["cut"], "{a,b,c}|{d}");
}

#[test]
fn extension_cycle_is_closed() {
    let v = json(&run(&["extension-cycle", "--extensions", "5,5,4", "--format", "json"]));
    assert_eq!(v["boundary_zero"], true);
    assert_eq!(v["k"], 3);
}

#[test]
fn tree_witness_is_not_a_boundary() {
    let g = graph_file("tree.txt", TREE);
    let v = json(&run(&["tree-witness", "--graph", g.to_str().unwrap(), "--partition", "{a}|{b}|{c,d}", "--format", "json"]));
    assert_eq!(v["not_a_boundary"], true);
    assert_eq!(v["betti"]["2"], 1);
}

#[test]
fn parallel_pair_verifies() {
    let g = graph_file("pair.txt", "a b 4\n");
    let v = json(&run(&["verify-wilmes", "--graph", g.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["conjecture"][0]["lhs"], 1);
    assert_eq!(v["conjecture"][0]["rhs"], 1);
    assert_eq!(v["conjecture"][0]["match"], true);
}
