use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fvs_core::io::parse_graph;
use serde_json::Value;
use tempfile::TempDir;

const C4: &str = "p fvs 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n";

fn fvs(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fvs")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn with_c4() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c4.graph"), C4).unwrap();
    dir
}

#[test]
fn solve_c4_yes_with_one_deletion() {
    let dir = with_c4();
    let out = fvs(dir.path(), &["solve", "c4.graph", "--k", "1", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["fvs"].as_array().unwrap().len(), 1);
    assert_eq!(v["certificate"], "dp");
    for field in ["weighted_width", "high_degree_count", "class_count", "timings"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
}

#[test]
fn solve_c4_no_at_zero() {
    let dir = with_c4();
    let out = fvs(dir.path(), &["solve", "c4.graph", "--k", "0"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("no"));
}

#[test]
fn every_mode_agrees_on_c4() {
    let dir = with_c4();
    for mode in ["auto", "dp-naive", "dp-rank", "oracle"] {
        assert_eq!(code(&fvs(dir.path(), &["solve", "c4.graph", "--k", "1", "--mode", mode])), 0, "{mode}");
        assert_eq!(code(&fvs(dir.path(), &["solve", "c4.graph", "--k", "0", "--mode", mode])), 1, "{mode}");
    }
}

#[test]
fn errors_exit_two_with_message() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.graph"), "p fvs 3 2\ne 0 1\ne 1 7\n").unwrap();
    let out = fvs(dir.path(), &["solve", "bad.graph", "--k", "1"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(code(&fvs(dir.path(), &["solve", "missing.graph", "--k", "1"])), 2);
    assert_eq!(code(&fvs(dir.path(), &["solve", "bad.graph", "--k", "1", "--mode", "fast"])), 2);
    assert_eq!(code(&fvs(dir.path(), &["solve", "bad.graph"])), 2);
}

#[test]
fn gen_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen", "--udg", "-n", "50", "--density", "0.2", "--seed", "1"];
    assert_eq!(code(&fvs(dir.path(), &[&args[..], &["--out", "a"]].concat())), 0);
    assert_eq!(code(&fvs(dir.path(), &[&args[..], &["--out", "b"]].concat())), 0);
    for ext in ["points", "graph"] {
        let a = fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext}");
    }
    let g = parse_graph(&fs::read_to_string(dir.path().join("a.graph")).unwrap()).unwrap();
    assert_eq!(g.n(), 50);
}

#[test]
fn gen_single_vertex() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fvs(dir.path(), &["gen", "--udg", "-n", "1", "--out", "one"])), 0);
    let g = parse_graph(&fs::read_to_string(dir.path().join("one.graph")).unwrap()).unwrap();
    assert_eq!((g.n(), g.m()), (1, 0));
    assert_eq!(code(&fvs(dir.path(), &["solve", "one.points", "--k", "0"])), 0);
}

#[test]
fn planted_hubs_leave_a_forest() {
    let dir = tempfile::tempdir().unwrap();
    let out = fvs(dir.path(), &["gen", "--planted", "-k", "9", "--seed", "2", "--out", "p"]);
    assert_eq!(code(&out), 0);
    let summary = json(&out);
    let hubs: Vec<usize> =
        summary["hubs"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect();
    assert_eq!(hubs.len(), 9);
    let g = parse_graph(&fs::read_to_string(dir.path().join("p.graph")).unwrap()).unwrap();
    assert!(!g.is_forest());
    assert!(g.is_forest_without(&hubs));
}

#[test]
fn planted_points_solve_at_k() {
    let dir = tempfile::tempdir().unwrap();
    fvs(dir.path(), &["gen", "--planted", "-k", "4", "--seed", "3", "--out", "p"]);
    let out = fvs(dir.path(), &["solve", "p.points", "--k", "4", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["fvs"].as_array().unwrap().len(), 4);
    let out = fvs(dir.path(), &["solve", "p.points", "--k", "3", "--no-thresholds"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn oracle_matches_and_refuses_beyond_budget() {
    let dir = with_c4();
    let out = fvs(dir.path(), &["oracle", "c4.graph", "--k", "1", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["optimum"], 1);
    assert_eq!(code(&fvs(dir.path(), &["oracle", "c4.graph", "--k", "0"])), 1);

    fvs(dir.path(), &["gen", "--udg", "-n", "30", "--seed", "4", "--out", "big"]);
    let out = fvs(dir.path(), &["oracle", "big.graph", "--k", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle refuses"));
}

#[test]
fn solve_agrees_with_oracle_on_small_udgs() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..6 {
        let prefix = format!("u{seed}");
        let seed = seed.to_string();
        fvs(dir.path(), &["gen", "--udg", "-n", "14", "--density", "1.5", "--seed", &seed, "--out", &prefix]);
        let graph = format!("{prefix}.graph");
        let opt = json(&fvs(dir.path(), &["oracle", &graph, "--k", "0", "--json"]))["optimum"].as_u64().unwrap();
        for k in [opt.saturating_sub(1), opt] {
            let k = k.to_string();
            let a = code(&fvs(dir.path(), &["solve", &graph, "--k", &k]));
            let b = code(&fvs(dir.path(), &["oracle", &graph, "--k", &k]));
            assert_eq!(a, b, "seed {seed} k {k}");
        }
    }
}

#[test]
fn validate_reports_and_round_trips_decompositions() {
    let dir = tempfile::tempdir().unwrap();
    fvs(dir.path(), &["gen", "--udg", "-n", "40", "--density", "1", "--seed", "5", "--out", "v"]);
    let out = fvs(dir.path(), &["validate", "v.graph", "--emit-td", "v.td"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    for field in ["violations", "kappa_observed", "max_contraction_degree", "class_count"] {
        assert!(report.get(field).is_some(), "missing {field}");
    }
    assert_eq!(report["decomposition"]["violations"].as_array().unwrap().len(), 0);
    let out = fvs(dir.path(), &["validate", "v.points", "--td", "v.td"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["decomposition"]["source"], "file");
}

#[test]
fn validate_flags_a_broken_decomposition() {
    let dir = with_c4();
    // bags {0,1,2} and {2,3}: edge 0-3 is not covered
    fs::write(dir.path().join("c4.td"), "s td 2 3 4\nb 0 0 1 2\nb 1 2 3\n0 1\n").unwrap();
    let out = fvs(dir.path(), &["validate", "c4.graph", "--td", "c4.td"]);
    assert_eq!(code(&out), 1);
    let v = json(&out)["decomposition"]["violations"].clone();
    assert_eq!(v[0]["kind"], "uncovered_edge");
}

#[test]
fn bench_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bench", "--ks", "1,4", "--seeds", "2", "--solve"];
    assert_eq!(code(&fvs(dir.path(), &[&args[..], &["--csv", "a.csv", "--json", "a.json"]].concat())), 0);
    assert_eq!(code(&fvs(dir.path(), &[&args[..], &["--csv", "b.csv"]].concat())), 0);
    let a = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read_to_string(dir.path().join("b.csv")).unwrap());
    assert_eq!(a.lines().count(), 5);
    assert!(a.lines().skip(1).all(|l| l.contains(",yes,")));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert!(report["rows"][0]["wall_time_ms"].is_number());
}

#[test]
fn bench_forests_are_yes_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = fvs(dir.path(), &["bench", "--family", "forest", "--ks", "1,3", "--seeds", "2", "--solve"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[8], "0", "{line}");
        assert_eq!(cols[11], "yes", "{line}");
    }
}

#[test]
fn compare_reports_agreement() {
    let dir = with_c4();
    let out = fvs(dir.path(), &["compare", "c4.graph"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!((v["dp_naive"].clone(), v["dp_rank"].clone(), v["oracle"].clone()), (1.into(), 1.into(), 1.into()));
    assert_eq!(v["agree"], true);
}
