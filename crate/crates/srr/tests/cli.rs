use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use srr::formats::{document, read_document, AllocationJson, CatalogJson, GraphJson, RegionJson, SchemeJson, WaterfillJson, SCHEMA};

fn srr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srr")).args(args).env_remove("SRR_SEED").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success() || code(o) == 2, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: TempDir::new().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }

    fn write(&self, name: &str, text: &str) -> String {
        fs::write(self.path(name), text).unwrap();
        self.s(name)
    }

    fn construct(&self, name: &str, args: &[&str]) -> String {
        let out = self.s(name);
        let mut all = vec!["construct"];
        all.extend_from_slice(args);
        all.extend_from_slice(&["--out", &out]);
        let o = srr(&all);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        out
    }
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn simplex_region_has_the_sum_facet() {
    let w = Work::new();
    let s = w.construct("simplex3.json", &["simplex", "--k", "3"]);
    let v = json(&srr(&["region", "--scheme", &s, "--format", "json"]));
    assert_eq!(v["schema"], SCHEMA);
    let facets: Vec<(Vec<String>, String)> = v["halfspaces"].as_array().unwrap().iter().map(|h| (strs(&h["a"]), h["b"].as_str().unwrap().to_string())).collect();
    assert!(facets.contains(&(vec!["1".into(), "1".into(), "1".into()], "4".into())), "{facets:?}");
    assert_eq!(facets.len(), 4);
}

#[test]
fn check_exit_codes() {
    let w = Work::new();
    let s = w.construct("rep22.json", &["replication", "--k", "2", "--replicas", "2,2"]);
    let yes = srr(&["check", "--scheme", &s, "--demand", "[2,2]"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(json(&yes)["achievable"], true);
    let no = srr(&["check", "--scheme", &s, "--demand", "[3,0]"]);
    assert_eq!(code(&no), 2);
    assert_eq!(json(&no)["achievable"], false);
    let file = w.write("d.json", r#"{"schema": "srr/1", "kind": "demand", "demand": ["3/2", 0.5]}"#);
    assert_eq!(code(&srr(&["check", "--scheme", &s, "--demand", &file])), 0);
}

#[test]
fn error_exit_codes() {
    let w = Work::new();
    assert_eq!(code(&srr(&["frobnicate"])), 64);
    assert_eq!(code(&srr(&["region"])), 64);
    assert_eq!(code(&srr(&["--help"])), 0);
    let bad = w.write("bad.json", r#"{"field": {"p": 2"#);
    assert_eq!(code(&srr(&["region", "--scheme", &bad])), 65);
    let s = w.construct("rep22.json", &["replication", "--k", "2", "--replicas", "2,2"]);
    assert_eq!(code(&srr(&["check", "--scheme", &s, "--demand", "[2,"])), 65);
    let wrong_type = w.write("t.json", r#"{"field": {"p": 2}, "k": "two", "n": 1, "mu": "1", "columns": [[1]]}"#);
    assert_eq!(code(&srr(&["region", "--scheme", &wrong_type])), 65);
    // Well-formed but invalid: rank deficient, wrong schema version, wrong dimension, missing file.
    let deficient = w.write("r.json", r#"{"field": {"p": 2}, "k": 2, "n": 2, "mu": "1", "columns": [[1, 0], [1, 0]]}"#);
    assert_eq!(code(&srr(&["region", "--scheme", &deficient])), 1);
    let version = w.write("v.json", r#"{"schema": "srr/9", "field": {"p": 2}, "k": 1, "n": 1, "mu": "1", "columns": [[1]]}"#);
    assert_eq!(code(&srr(&["region", "--scheme", &version])), 1);
    assert_eq!(code(&srr(&["check", "--scheme", &s, "--demand", "[1,1,1]"])), 1);
    assert_eq!(code(&srr(&["check", "--scheme", &w.s("missing.json"), "--demand", "[1,1]"])), 1);
    assert_eq!(code(&srr(&["construct", "mds", "--n", "12", "--k", "2", "--q", "3"])), 1);
}

fn roundtrip<T>(v: &Value, kind: &str)
where
    T: serde::de::DeserializeOwned + serde::Serialize,
{
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["kind"], kind);
    let parsed: T = read_document(v.clone(), kind, "test").unwrap();
    assert_eq!(&document(kind, &parsed), v, "{kind} does not round-trip");
}

#[test]
fn outputs_round_trip() {
    let w = Work::new();
    let mds = w.construct("mds.json", &["mds", "--n", "4", "--k", "2", "--q", "3"]);
    let lrc = w.construct("lrc.json", &["lrc", "--example"]);
    let gf4 = w.construct("gf4.json", &["mds", "--n", "5", "--k", "2", "--q", "4", "--mu", "3/2"]);
    for s in [&mds, &lrc, &gf4] {
        let v: Value = serde_json::from_str(&fs::read_to_string(s).unwrap()).unwrap();
        roundtrip::<SchemeJson>(&v, "scheme");
        let doc: SchemeJson = read_document(v, "scheme", "test").unwrap();
        assert_eq!(SchemeJson::of(&doc.scheme().unwrap(), doc.lrc.as_ref().map(|l| l.profile()).as_ref()), doc);
    }
    roundtrip::<CatalogJson>(&json(&srr(&["recovery", "--scheme", &mds])), "catalog");
    let region = json(&srr(&["region", "--scheme", &mds]));
    roundtrip::<RegionJson>(&region, "region");
    let parsed: RegionJson = read_document(region.clone(), "region", "test").unwrap();
    assert_eq!(RegionJson::of(&parsed.polytope()), parsed);
    roundtrip::<RegionJson>(&json(&srr(&["bounds", "--scheme", &mds, "--counting"])), "region");
    roundtrip::<WaterfillJson>(&json(&srr(&["waterfill", "--scheme", &mds, "--demand", "[2,1]", "--decompose"])), "waterfill");
    roundtrip::<WaterfillJson>(&json(&srr(&["waterfill", "--scheme", &lrc, "--demand", "[1,1,1,1]"])), "waterfill");
    roundtrip::<GraphJson>(&json(&srr(&["graph", "--scheme", &mds, "--mode", "full", "--stats"])), "graph");

    let check = json(&srr(&["check", "--scheme", &gf4, "--demand", "[\"5/2\", 1]"]));
    let alloc = serde_json::to_string(&document("allocation", &check["allocation"])).unwrap();
    let alloc_path = w.write("alloc.json", &alloc);
    let a: AllocationJson = read_document(serde_json::from_str(&alloc).unwrap(), "allocation", "test").unwrap();
    assert_eq!(a.rates.len(), 2);
    let cost = json(&srr(&["cost", "--scheme", &gf4, "--demand", "[\"5/2\", 1]", "--alloc", &alloc_path]));
    assert_eq!(cost["achievable"], true);
    assert!(cost["given_cost"].is_string());
}

#[test]
fn waterfill_and_cost_values() {
    let w = Work::new();
    let mds = w.construct("mds.json", &["mds", "--n", "4", "--k", "2", "--q", "3"]);
    let v = json(&srr(&["cost", "--scheme", &mds, "--demand", "[1.5, 0.5]"]));
    assert_eq!(v["min_cost"], "5/4");
    let over = srr(&["waterfill", "--scheme", &mds, "--demand", "[3, 0]"]);
    assert_eq!(code(&over), 2);
    assert_eq!(json(&over)["feasible"], false);
    let rep = w.construct("rep.json", &["replication", "--k", "2", "--replicas", "2,2"]);
    assert_eq!(code(&srr(&["waterfill", "--scheme", &rep, "--demand", "[1,1]"])), 1);
}

#[test]
fn batch_and_graph() {
    let w = Work::new();
    let s = w.construct("simplex3.json", &["simplex", "--k", "3"]);
    assert_eq!(code(&srr(&["batch", "--scheme", &s, "--t", "4"])), 0);
    assert_eq!(code(&srr(&["batch", "--scheme", &s, "--t", "5"])), 2);
    let v = json(&srr(&["batch", "--scheme", &s, "--demand", "[1,3,0]"]));
    assert_eq!(v["integral"], true);
    assert_eq!(code(&srr(&["batch", "--scheme", &s])), 64);
    let g = json(&srr(&["graph", "--scheme", &s, "--stats"]));
    assert_eq!(g["stats"]["fractional_matching_number"], "4");
    assert_eq!(g["stats"]["vertex_cover_number"], 4);
}

#[test]
fn seeds_come_from_flag_then_environment() {
    let w = Work::new();
    let s = w.construct("mds.json", &["mds", "--n", "4", "--k", "2", "--q", "3"]);
    let d = w.write("box.json", r#"{"type": "uniform_box", "bounds": ["3", "3"]}"#);
    let args = ["coverage", "--scheme", s.as_str(), "--dist", d.as_str(), "--samples", "2000"];
    assert_eq!(json(&srr(&args))["seed"], 1);
    let env = Command::new(env!("CARGO_BIN_EXE_srr")).args(args).env("SRR_SEED", "77").output().unwrap();
    assert_eq!(json(&env)["seed"], 77);
    let mut flagged = args.to_vec();
    flagged.extend(["--seed", "5"]);
    let a = Command::new(env!("CARGO_BIN_EXE_srr")).args(&flagged).env("SRR_SEED", "77").output().unwrap();
    assert_eq!(json(&a)["seed"], 5);
    assert_eq!(json(&srr(&flagged)), json(&a));
    let bad = Command::new(env!("CARGO_BIN_EXE_srr")).args(args).env("SRR_SEED", "x").output().unwrap();
    assert_eq!(code(&bad), 1);
}

#[test]
fn simulation_and_queue_trace() {
    let w = Work::new();
    let s = w.construct("rep.json", &["replication", "--k", "2", "--replicas", "2,2"]);
    let q = w.s("queues.csv");
    let v = json(&srr(&["simulate", "--scheme", &s, "--demand", "[1.8,1.8]", "--horizon", "20000", "--seed", "3", "--queue-csv", &q]));
    assert_eq!(v["all_stable"], true);
    for u in v["utilization"].as_array().unwrap() {
        assert!((u.as_f64().unwrap() - 0.9).abs() < 0.03, "{u}");
    }
    let trace = fs::read_to_string(&q).unwrap();
    assert!(trace.starts_with("time,server0,server1,server2,server3\n"));
    assert!(trace.lines().count() > 500);
    let over = json(&srr(&["simulate", "--scheme", &s, "--demand", "[2.2,0]", "--horizon", "20000"]));
    assert_eq!(over["all_stable"], false);
}

fn csv_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(String::from).collect()
}

#[test]
fn reproduce_figures() {
    let w = Work::new();
    let dir = w.path("figs");
    let d = dir.display().to_string();
    for fig in ["fig1", "fig3", "fig10-slice", "fig12"] {
        let m = json(&srr(&["reproduce", fig, "--out-dir", &d]));
        assert_eq!(m["kind"], "manifest");
        for f in m["files"].as_array().unwrap() {
            assert!(dir.join(f["path"].as_str().unwrap()).exists());
        }
    }
    assert_eq!(csv_rows(&dir.join("fig1_mds.csv")), ["lambda0,lambda1", "0,0", "0,5/2", "1,2", "2,1", "5/2,0"]);
    assert_eq!(csv_rows(&dir.join("fig1_replication.csv")).len(), 5);
    assert!(dir.join("fig1_hybrid.csv").exists());
    assert_eq!(csv_rows(&dir.join("fig10_slice_exact.csv")), ["lambda0,lambda1", "0,0", "0,10/3", "2,2", "4,0"]);
    let weights: Vec<String> = csv_rows(&dir.join("fig12_fractional.csv")).iter().skip(1).map(|r| format!("{}:{}", r.split(',').nth(1).unwrap(), r.rsplit(',').next().unwrap())).collect();
    assert!(weights.iter().filter(|w| w.starts_with("0:")).all(|w| w == "0:1/4"));
    assert!(weights.iter().filter(|w| w.starts_with("1:")).all(|w| w == "1:3/4"));
    assert_eq!(csv_rows(&dir.join("fig12_integral.csv")), ["object,servers,rate", "0,0,1", "1,1,1", "1,3 5,1", "1,4 6,1"]);
    // The manifest's calls regenerate the same CSV.
    let again = srr(&["--format", "csv", "region", "--scheme", &dir.join("fig10_rm.scheme.json").display().to_string(), "--keep", "0,3"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), fs::read_to_string(dir.join("fig10_slice_exact.csv")).unwrap());
    assert_eq!(code(&srr(&["reproduce", "fig99"])), 64);
}

#[test]
fn sweep_matches_check() {
    let w = Work::new();
    let s = w.construct("mds.json", &["mds", "--n", "4", "--k", "2", "--q", "3"]);
    let v = json(&srr(&["sweep", "--scheme", &s, "--steps", "4"]));
    assert_eq!(v["max"], "5/2");
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 25);
    for p in points.iter().step_by(6) {
        let d = serde_json::to_string(&p["demand"]).unwrap();
        let c = srr(&["check", "--scheme", &s, "--demand", &d]);
        assert_eq!(code(&c) == 0, p["achievable"].as_bool().unwrap(), "{d}");
    }
}
