use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn vantage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vantage"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn rank_on_a_line() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"dim":1,"points":[["0"],["1"],["3"]]}"#);
    let v = write(&dir, "v.json", r#"{"dim":1,"points":[["0"]]}"#);
    let out = vantage(&["rank", s(&c), s(&v)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ordering"], serde_json::json!([0, 1, 2]));
}

#[test]
fn tie_and_bad_input_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"dim":1,"points":[["0"],["1"],["3"]]}"#);
    let v = write(&dir, "v.json", r#"{"dim":1,"points":[["2"]]}"#);
    let out = vantage(&["rank", s(&c), s(&v)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["tie"], serde_json::json!([1, 2]));

    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(vantage(&["rank", s(&bad), s(&v)]).status.code(), Some(2));
    let empty = write(&dir, "empty.json", r#"{"dim":2,"points":[]}"#);
    assert_eq!(vantage(&["plot", "points", s(&empty)]).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(vantage(&["enum", s(&missing)]).status.code(), Some(2));
    assert_eq!(vantage(&["bounds", "warren", "--n", "2"]).status.code(), Some(2));
    assert_eq!(vantage(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bounds_values() {
    let out = vantage(&["bounds", "good-tideman", "--n", "4", "--d", "2"]);
    assert_eq!(json(&out)["value"], "18");
    let out = vantage(&["bounds", "stirling", "--n", "5", "--r", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "formula,parameters,value\nstirling,n=5;r=2,50\n");
}

#[test]
fn enum_equally_spaced_line() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"dim":1,"points":[[0],[1],[2],[3],[4]]}"#);
    let out = vantage(&["enum", s(&c)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 8);
}

#[test]
fn catalog_jsonl_round_trips() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"dim":2,"points":[["0","0"],["3","1"],["1","4"],["-2","2"]]}"#);
    let out = vantage(&["enum", s(&c), "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = vantage::io::parse_catalog_jsonl(&text).unwrap();
    assert_eq!(parsed.len(), 18);
    let set = vantage::io::parse_candidate_set(&std::fs::read_to_string(&c).unwrap()).unwrap();
    for (ordering, v) in parsed {
        assert_eq!(vantage::geometry::rank(&set, &v).unwrap(), ordering);
    }
}

#[test]
fn witness_output_parses_and_verifies() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "sq.json", r#"{"dim":2,"points":[[0,0],[1,0],[1,1],[0,1]]}"#);
    let out = vantage(&["witness", "distmatrix", s(&c), "--ordering", "2,0,1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["certificate"]["verified"], true);
    let v = vantage::io::parse_multiset(&body["certificate"]["vantage"].to_string()).unwrap();
    let set = vantage::io::parse_candidate_set(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(vantage::geometry::rank(&set, &v).unwrap().perm, vec![2, 0, 1, 3]);

    let line = write(&dir, "line.json", r#"{"dim":1,"points":[[0],[1],[2],[3]]}"#);
    let out = vantage(&["witness", "d1", s(&line), "--ordering", "0,3,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = vantage(&["witness", "d1", s(&line), "--ordering", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn six_point_verification_passes() {
    let out = vantage(&["verify", "sixpoint"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["pass"], true);
    assert_eq!(body["grid_side"], 251);
    let out = vantage(&["verify", "sixpoint", "--grid-step", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn plots_are_deterministic_svg() {
    let a = vantage(&["plot", "sixpoint"]);
    let b = vantage(&["plot", "sixpoint"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(a.stdout.starts_with(b"<svg"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(vantage(&["plot", "flanked"]).status.code(), Some(0));
}

#[test]
fn seeded_runs_are_byte_identical_and_reported() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"dim":2,"points":[["0","0"],["3","1"],["1","4"]]}"#);
    let r1 = dir.path().join("r1.json");
    let args = |report: &Path| {
        vec![
            "estimate".to_string(),
            s(&c).to_string(),
            "--trials".into(),
            "3000".into(),
            "--seed".into(),
            "7".into(),
            "--report".into(),
            s(report).to_string(),
        ]
    };
    let run = |report: &Path| {
        let a = args(report);
        vantage(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let a = run(&r1);
    let b = run(&dir.path().join("r2.json"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["count"], 6);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&r1).unwrap()).unwrap();
    assert_eq!(report["seed"], 7);
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(report["exit_code"], 0);
}

#[test]
fn constructions_run() {
    let out = vantage(&["construct", "d1-flank", "--k", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["distinct"].as_u64().unwrap() >= 16);
    let out = vantage(&["construct", "flanked", "--instances", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = vantage(&["construct", "lower-bound", "--n", "6"]);
    assert_eq!(json(&out)["catalog_size"], 16);
}

#[test]
fn unwitnessed_search_on_a_line_is_empty() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"dim":1,"points":[[0],[1],[3],[7]]}"#);
    let out = vantage(&["unwitnessed", s(&c), "--trials", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["protrusive"], 8);
    assert_eq!(body["unwitnessed"], serde_json::json!([]));
}
