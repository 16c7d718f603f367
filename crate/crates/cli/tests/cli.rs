//! Subcommand formats and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_planar-cover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_writes_graph_json() {
    let out = run(&["gen", "--family", "grid(1)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 9);
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);
    assert_eq!(v["rotation"].as_array().unwrap().len(), 9);
    for e in v["edges"].as_array().unwrap() {
        assert!(e[0].as_u64() < e[1].as_u64());
    }
}

#[test]
fn pack_and_select_round_trip_through_files() {
    let graph = scratch("tri.json");
    let packing = scratch("pack.json");
    let out = run(&["gen", "--family", "grid(2)", "--triangulate", "--out", graph.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&["pack", "--graph", graph.to_str().unwrap(), "--out", packing.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let p: serde_json::Value = serde_json::from_str(&fs::read_to_string(&packing).unwrap()).unwrap();
    for key in ["centers", "radii", "outer_face", "residual"] {
        assert!(p.get(key).is_some(), "missing {key}");
    }
    assert!(p["residual"].as_f64().unwrap() < 1e-8);
    let out = run(&[
        "select",
        "--graph",
        graph.to_str().unwrap(),
        "--packing",
        packing.to_str().unwrap(),
        "--subset",
        "all",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["result"]["empirical_r"].as_f64().unwrap() > 0.0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn resist_csv_columns() {
    let out = run(&["resist", "--family", "k4", "--pairs", "0-1,2-3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "u,v,resistance,solver_tol,version");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..2], &["0", "1"]);
    assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    let out = run(&["resist", "--family", "cycle(4)", "--all-pairs"]);
    assert_eq!(stdout(&out).lines().count(), 1 + 6);
}

#[test]
fn hit_and_cover() {
    let out = run(&["hit", "--family", "path(3)", "--target", "2"]);
    let text = stdout(&out);
    let h: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!((h[0] - 4.0).abs() < 1e-9 && (h[1] - 3.0).abs() < 1e-9 && h[2] == 0.0);
    let out = run(&["cover", "--family", "path(2)", "--trials", "10", "--seed", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,edges,start,trials,seed,mean,std_error"));
    assert!(text.lines().nth(1).unwrap().starts_with("2,1,0,10,3,1.0,0.0"));
}

#[test]
fn matthews_json() {
    let out = run(&["matthews", "--family", "cycle(4)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["result"]["lower"].as_f64().unwrap() - 5.5).abs() < 1e-9);
    assert!((v["result"]["upper"].as_f64().unwrap() - 22.0 / 3.0).abs() < 1e-9);
    let out = run(&["matthews", "--family", "cycle(4)", "--subset", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_passes_on_small_families() {
    let out = run(&["suite", "--family", "cycle", "--sizes", "3,6,9"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn exit_codes() {
    // threshold above the path resistance: assertion failure
    let out = run(&["verify", "--family", "path(9)", "--subset", "0,8", "--threshold", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["verify", "--family", "path(9)", "--subset", "0,8", "--threshold", "5"]);
    assert_eq!(out.status.code(), Some(0));
    // usage and input errors
    assert_eq!(run(&["scaling"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--family", "hexagon(2)"]).status.code(), Some(2));
    let k5 = scratch("k5.json");
    let edges: Vec<[usize; 2]> = (0..5).flat_map(|u| (u + 1..5).map(move |v| [u, v])).collect();
    fs::write(&k5, serde_json::json!({ "n": 5, "edges": edges }).to_string()).unwrap();
    assert_eq!(run(&["resist", "--graph", k5.to_str().unwrap(), "--all-pairs"]).status.code(), Some(2));
    // a solver tolerance below rounding cannot be met
    let out = run(&["resist", "--family", "grid(2)", "--pairs", "0-24", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scaling_is_reproducible_and_embeds_parameters() {
    let args = ["scaling", "--family", "cycle", "--sizes", "4,5", "--trials", "500", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    for col in ["seed", "trials", "solver_tol", "version", "mean", "std_error", "matthews_lower"] {
        assert!(header.contains(&col), "missing column {col}");
    }
    let json = run(&["scaling", "--family", "cycle", "--sizes", "4", "--trials", "50", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["seed"], 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}
