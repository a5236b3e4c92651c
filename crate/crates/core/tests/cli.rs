use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nonforcing"));
    c.env_remove("NONFORCING_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nonforcing-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn roots_truncated_includes_sigma_block() {
    let o = run(&["roots", "--p", "0.25", "--truncated-k", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p"], "0.25");
    assert_eq!(v["roots"].as_array().unwrap().len(), 5);
    let sym = v["symmetric"].as_array().unwrap();
    assert_eq!(sym.len(), 5);
    assert!(sym.iter().all(|c| c["within"] == true));
    assert_eq!(v["max_weight"]["holds"], true);
}

#[test]
fn roots_above_one_half_exit_2() {
    let o = run(&["roots", "--p", "0.6", "--truncated-k", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("non-real roots"), "{}", stderr(&o));
}

#[test]
fn forced_partial_roots_exit_2_with_a_table() {
    let o = run(&["roots", "--p", "0.6", "--k", "4", "--force"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], false);
}

#[test]
fn roots_entire_reports_tail_and_csv() {
    let dir = scratch("entire");
    let out = dir.join("r.json");
    let o = run(&["roots", "--p", "0.5", "--entire-m", "40", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 40);
    let tail: f64 = v["tail_mass"].as_str().unwrap().parse().unwrap();
    assert!(tail > 0.0 && tail < 1e-9, "{tail}");

    let o = run(&["roots", "--p", "0.25", "--k", "3", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("index,root,weight\n1,-"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn invalid_parameters_exit_1() {
    assert_eq!(run(&["roots", "--p", "1.5", "--k", "3"]).status.code(), Some(1));
    assert_eq!(run(&["roots", "--p", "zero", "--k", "3"]).status.code(), Some(1));
    assert_eq!(run(&["roots", "--p", "0.25"]).status.code(), Some(1));
    assert_eq!(run(&["construct", "--family", "paley", "--n", "7"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn construct_writes_graph_and_witness() {
    let dir = scratch("construct");
    let g = dir.join("g.edges");
    let o = run(&["construct", "--p", "0.25", "--k", "2", "--n", "100", "--out", s(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("part sizes: 85 15"), "{}", stderr(&o));
    let text = fs::read_to_string(&g).unwrap();
    assert!(text.starts_with("100 1275\n0 85\n"));
    let w: Value = serde_json::from_str(&fs::read_to_string(dir.join("g.edges.witness.json")).unwrap()).unwrap();
    assert_eq!(w["parts"][1].as_array().unwrap().len(), 15);
    assert_eq!(w["weights"].as_array().unwrap().len(), 2);
}

#[test]
fn construct_from_a_root_table() {
    let dir = scratch("from-table");
    let table = dir.join("weights.json");
    assert_eq!(run(&["roots", "--p", "0.2", "--k", "4", "--out", s(&table)]).status.code(), Some(0));
    let g = dir.join("g.edges");
    let o = run(&["construct", "--weights", s(&table), "--n", "1000", "--out", s(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&table).unwrap()).unwrap();
    let w: Value = serde_json::from_str(&fs::read_to_string(dir.join("g.edges.witness.json")).unwrap()).unwrap();
    for (c, part) in v["weights"].as_array().unwrap().iter().zip(w["parts"].as_array().unwrap()) {
        let c: f64 = c.as_str().unwrap().parse().unwrap();
        assert!((part.as_array().unwrap().len() as f64 - 1000.0 * c).abs() < 1.0);
    }
}

#[test]
fn output_directory_from_the_environment() {
    let dir = scratch("env");
    let o = bin()
        .args(["construct", "--family", "complete-bipartite", "--n", "6"])
        .env("NONFORCING_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(fs::read_to_string(dir.join("graph.edges")).unwrap().starts_with("6 9\n"));
    assert!(dir.join("graph.edges.witness.json").exists());
}

#[test]
fn sample_is_reproducible() {
    let dir = scratch("sample");
    let a = dir.join("a.edges");
    let b = dir.join("b.edges");
    for out in [&a, &b] {
        let o = run(&["sample", "--p", "0.7", "--m", "60", "--n", "300", "--seed", "42", "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.join("a.edges.witness.json")).unwrap(),
        fs::read(dir.join("b.edges.witness.json")).unwrap()
    );
    let c = dir.join("c.edges");
    run(&["sample", "--p", "0.7", "--m", "60", "--n", "300", "--seed", "43", "--out", s(&c)]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn sample_tail_and_seed_rules() {
    let o = run(&["sample", "--p", "0.7", "--m", "3", "--n", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("raise m"), "{}", stderr(&o));
    let o = run(&["sample", "--p", "0.5", "--m", "40", "--n", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["sample", "--p", "0.5", "--m", "40", "--n", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "1 0\n");
}

#[test]
fn audit_reads_the_witness_and_reports_p3_failure() {
    let dir = scratch("audit");
    let g = dir.join("g.edges");
    assert_eq!(run(&["construct", "--p", "0.25", "--k", "2", "--n", "400", "--out", s(&g)]).status.code(), Some(0));
    let report = dir.join("audit.json");
    let o = run(&["audit", "--graph", s(&g), "--p", "0.25", "--k-max", "2", "--out", s(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"], "clique_consistent_but_p3_fail");
    assert_eq!(v["clique_rows"][0]["method"], "structured");
    assert!(v["clique_rows"][0]["labeled_count"].is_string());
    let witness_row = v["p3_samples"].as_array().unwrap().iter().find(|s| s["source"] == "witness part 0").unwrap();
    assert_eq!(witness_row["rel_dev"], -1.0);

    let csv = run(&["audit", "--graph", s(&g), "--p", "0.25", "--k-max", "3", "--format", "csv", "--p3-trials", "3"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("kind,name,size,count,expected,rel_dev,tolerance,within\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("p3,")).count(), 4);
}

#[test]
fn audit_is_deterministic() {
    let dir = scratch("audit-det");
    let g = dir.join("g.edges");
    run(&["construct", "--family", "gnp", "--p", "0.5", "--n", "150", "--seed", "5", "--out", s(&g)]);
    let a = run(&["audit", "--graph", s(&g), "--p", "0.5", "--k-max", "3"]);
    let b = run(&["audit", "--graph", s(&g), "--p", "0.5", "--k-max", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_edge_list_exit_1_with_line() {
    let dir = scratch("bad");
    let g = dir.join("bad.edges");
    fs::write(&g, "4 2\n0 1\n1 9\n").unwrap();
    let o = run(&["audit", "--graph", s(&g), "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = run(&["audit", "--graph", s(&dir.join("missing.edges")), "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn demo_small_pipeline() {
    let o = run(&["demo", "--p", "0.25", "--k", "2", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("part sizes: 85 15"), "{text}");
    assert!(text.contains("verdict: clique_consistent_but_p3_fail"), "{text}");

    let o = run(&["demo", "--p", "0.7", "--k", "3", "--n", "300", "--seed", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["route"], "graphon");
    assert_eq!(v["p"], "0.7");
}

#[test]
fn demo_refuses_truncated_route_when_kurtz_fails() {
    let o = run(&["demo", "--p", "0.4", "--k", "4", "--n", "100", "--route", "truncated"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("Kurtz"));
}
