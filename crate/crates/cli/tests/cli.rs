use std::path::PathBuf;
use std::process::{Command, Output};

fn nicolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nicolor"))
        .args(args)
        .env_remove("NICOLOR_OUT_DIR")
        .output()
        .expect("spawn nicolor")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nicolor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn run_prints_a_verified_report() {
    let out = nicolor(&["run", "--graph", "path:3", "--alg", "edge-2delta"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["verification"]["legal"], true);
    assert!(r["colors_used"].as_u64().unwrap() <= 3);
}

#[test]
fn defective_benchmark_respects_bound() {
    let out = nicolor(&["run", "--graph", "line:bipartite:9,9", "--alg", "defective", "--params", "b=2,p=8"]);
    assert!(out.status.success());
    assert!(json(&out)["measured_defect"].as_u64().unwrap() <= 8);
}

#[test]
fn gen_run_verify_round_trip() {
    let graph = scratch("g.txt");
    let coloring = scratch("c.txt");
    assert!(nicolor(&["gen", "line:bipartite:17,17", "-o", graph.to_str().unwrap()]).status.success());
    let file_spec = format!("file:{}", graph.display());
    let run = nicolor(&[
        "run", "--graph", &file_spec, "--alg", "legal", "--preset", "custom", "--params", "b=2,p=9,lambda=8",
        "--coloring-out", coloring.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let verify = nicolor(&["verify", "--graph", graph.to_str().unwrap(), "--coloring", coloring.to_str().unwrap()]);
    assert!(verify.status.success());
    assert_eq!(json(&verify)["legal"], true);
}

#[test]
fn verify_exits_nonzero_with_witness() {
    let graph = scratch("tri.txt");
    let coloring = scratch("bad.txt");
    std::fs::write(&graph, "3 3\n1 2\n2 3\n1 3\n").unwrap();
    std::fs::write(&coloring, "palette 3 defect 0\n1 1\n2 1\n3 2\n").unwrap();
    let out = nicolor(&["verify", "--graph", graph.to_str().unwrap(), "--coloring", coloring.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["legal"], false);
    assert!(!r["violated"].as_array().unwrap().is_empty());
}

#[test]
fn infeasible_preset_is_an_error() {
    let out = nicolor(&["run", "--graph", "line:bipartite:9,9", "--alg", "legal", "--preset", "thm45:3/4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("4097"));
}

#[test]
fn bench_writes_csv_rows_per_point() {
    let out = nicolor(&[
        "bench", "--graph", "bipartite:{delta},{delta}", "--deltas", "16,32", "--alg", "edge-direct", "--preset",
        "thm46", "--msg-mode", "short",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let rounds = headers.iter().position(|h| h == "rounds").unwrap();
    let rounds: Vec<u64> = rows.records().map(|r| r.unwrap()[rounds].parse().unwrap()).collect();
    assert_eq!(rounds.len(), 2);
    assert!(rounds[0] <= rounds[1]);
}

#[test]
fn out_dir_from_environment() {
    let dir = scratch("reports");
    let out = Command::new(env!("CARGO_BIN_EXE_nicolor"))
        .args(["run", "--graph", "cycle:10", "--alg", "linial"])
        .env("NICOLOR_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(written.len(), 1);
}

#[test]
fn spec_file_reproduces_report() {
    let spec = scratch("spec.json");
    std::fs::write(&spec, r#"{"graph":"gnd:200,10","seed":3,"algorithm":"kuhn-vertex","d":3}"#).unwrap();
    let a = nicolor(&["run", "--spec", spec.to_str().unwrap()]);
    let b = nicolor(&["run", "--spec", spec.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
