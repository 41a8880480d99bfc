use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crossing-maxcut"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn geometric(points: &[(i64, i64)], edges: &[(u32, u32)]) -> Value {
    let vertices: Vec<Value> =
        points.iter().enumerate().map(|(i, (x, y))| json!({"id": i, "x": x, "y": y})).collect();
    let edges: Vec<Value> =
        edges.iter().enumerate().map(|(i, (u, v))| json!({"id": i, "u": u, "v": v, "weight": 1})).collect();
    json!({"format": "geometric", "vertices": vertices, "edges": edges})
}

fn complete(n: u32) -> Vec<(u32, u32)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn cycle(n: u32) -> Vec<(u32, u32)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

fn solve_json(path: &Path) -> Value {
    let o = run(&["solve", path.to_str().unwrap(), "--no-timing"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn k5_one_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "k5.json", &geometric(&[(8, 3), (8, 6), (7, 5), (6, 5), (0, 8)], &complete(5)));
    let v = solve_json(&p);
    assert_eq!(v["value"], "6");
    assert_eq!(v["stats"]["branches"], 2);
    assert_eq!(v["stats"]["k"], 1);
    assert_eq!(v["stats"]["n"], 5);
    assert_eq!(v["partition"].as_object().unwrap().len(), 5);
}

#[test]
fn k6_three_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [(0, 2), (2, 6), (5, 5), (12, 7), (2, 4), (0, 12)];
    let p = write(dir.path(), "k6.json", &geometric(&pts, &complete(6)));
    let v = solve_json(&p);
    assert_eq!(v["value"], "9");
    assert_eq!(v["stats"]["branches"], 8);
}

#[test]
fn grid_is_fully_cut() {
    let dir = tempfile::tempdir().unwrap();
    let pts: Vec<(i64, i64)> = (0..9).map(|i| (i % 3, i / 3)).collect();
    let mut edges = Vec::new();
    for i in 0..9u32 {
        if i % 3 < 2 {
            edges.push((i, i + 1));
        }
        if i < 6 {
            edges.push((i, i + 3));
        }
    }
    let p = write(dir.path(), "grid.json", &geometric(&pts, &edges));
    let v = solve_json(&p);
    assert_eq!(v["value"], "12");
    assert_eq!(v["stats"]["branches"], 1);
    let o = run(&["oracle", p.to_str().unwrap()]);
    let w: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(w["brute_mc"], "12");
}

#[test]
fn output_is_byte_stable_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [(0, 2), (2, 6), (5, 5), (12, 7), (2, 4), (0, 12)];
    let p = write(dir.path(), "k6.json", &geometric(&pts, &complete(6)));
    let a = run(&["solve", p.to_str().unwrap(), "--no-timing"]);
    let b = run(&["solve", p.to_str().unwrap(), "--no-timing", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emits_branch_instances() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "k5.json", &geometric(&[(8, 3), (8, 6), (7, 5), (6, 5), (0, 8)], &complete(5)));
    let leaves = dir.path().join("leaves");
    let o = run(&["solve", p.to_str().unwrap(), "--emit-branch-instances", leaves.to_str().unwrap()]);
    assert!(o.status.success());
    let files: Vec<_> = std::fs::read_dir(&leaves).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 2);
    for f in files {
        let v = run(&["validate", f.to_str().unwrap()]);
        assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stderr));
    }
}

#[test]
fn oracle_cycle_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)];
    let p = write(dir.path(), "c5.json", &geometric(&pts, &cycle(5)));
    let o = run(&["oracle", p.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["brute_mc"], "4");

    let o = bin()
        .args(["oracle", p.to_str().unwrap()])
        .env("MAXCUT_ORACLE_MAX_VERTICES", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = bin().args(["oracle", p.to_str().unwrap()]).env("MAXCUT_ORACLE_MAX_EDGES", "4").output().unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn oracle_with_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = geometric(&[(0, 0), (4, 0), (2, 3)], &cycle(3));
    v["constraints"] = json!([[0, 1], [1, 2]]);
    let p = write(dir.path(), "t.json", &v);
    let o = run(&["oracle", p.to_str().unwrap(), "--constraints"]);
    let out: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out["brute_mc"], "2");
    assert_eq!(out["brute_cmc"], "2");
    v["constraints"] = json!([[0, 1], [1, 2], [2, 0]]);
    let p = write(dir.path(), "t.json", &v);
    let o = run(&["oracle", p.to_str().unwrap(), "--constraints"]);
    let out: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out["brute_cmc"], Value::Null);
    // solve does not take constraints
    assert_eq!(run(&["solve", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn seed_suite_passes() {
    let o = run(&["oracle", "--seed-suite", "100"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], 100);
    assert_eq!(v["failed"], 0);
}

#[test]
fn validate_reports() {
    let dir = tempfile::tempdir().unwrap();
    let planar = write(dir.path(), "c5.json", &geometric(&[(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)], &cycle(5)));
    let o = run(&["validate", planar.to_str().unwrap()]);
    assert_eq!(stdout(&o), "ok, k=0, 1-planar=true\n");

    // two crossings, each edge crossed once
    let two = write(
        dir.path(),
        "two.json",
        &geometric(&[(0, 0), (2, 2), (0, 2), (2, 0), (4, 0), (4, 2)], &[(0, 1), (2, 3), (3, 5), (1, 4)]),
    );
    let o = run(&["validate", two.to_str().unwrap()]);
    assert_eq!(stdout(&o), "ok, k=2, 1-planar=true\n");

    // three segments through (1, 1)
    let triple = write(
        dir.path(),
        "triple.json",
        &geometric(&[(0, 0), (2, 2), (0, 2), (2, 0), (1, 0), (1, 2)], &[(0, 1), (2, 3), (4, 5)]),
    );
    let o = run(&["validate", triple.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["solve", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn combinatorial_round_trip_through_solve() {
    // square 0,1,2,3 with crossing diagonals 0-2 and 1-3 meeting at node 4
    let text = r#"{
  "format": "combinatorial",
  "nodes": [
    {"id": 0, "kind": "vertex", "rotation": [4, 0, 7]},
    {"id": 1, "kind": "vertex", "rotation": [5, 2, 4]},
    {"id": 2, "kind": "vertex", "rotation": [6, 1, 5]},
    {"id": 3, "kind": "vertex", "rotation": [6, 7, 3]},
    {"id": 4, "kind": "crossing", "rotation": [1, 3, 0, 2]}
  ],
  "edges": [
    {"id": 0, "u": 0, "v": 2, "weight": "3/2", "segments": [0, 1]},
    {"id": 1, "u": 1, "v": 3, "weight": 2, "segments": [2, 3]},
    {"id": 2, "u": 0, "v": 1, "weight": -1, "segments": [4]},
    {"id": 3, "u": 1, "v": 2, "weight": "1/3", "segments": [5]},
    {"id": 4, "u": 2, "v": 3, "weight": 1, "segments": [6]},
    {"id": 5, "u": 3, "v": 0, "weight": "5/2", "segments": [7]}
  ]
}"#;
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    std::fs::write(&p, text).unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "ok, k=1, 1-planar=true\n");
    let v = solve_json(&p);
    let o = run(&["oracle", p.to_str().unwrap()]);
    let w: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], w["brute_mc"]);
    assert_eq!(v["stats"]["branches"], 2);
}
