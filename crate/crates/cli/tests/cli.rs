use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn stallings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stallings"))
        .args(args)
        .env_remove("STALLINGS_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = stallings(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn core_dumps() {
    let ab = json(&["core", "ab"]);
    assert_eq!(ab["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(ab["basepoint"], 0);
    let trivial = json(&["core", ""]);
    assert_eq!(trivial["vertices"].as_array().unwrap().len(), 1);
    assert!(trivial["darts"].as_array().unwrap().is_empty());
    let c = json(&["core", "a,baB"]);
    assert_eq!(c["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(c["darts"].as_array().unwrap().len(), 6);
}

#[test]
fn dump_load_dump_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("core.json");
    let first = stallings(&["core", "aab,bbA,abAB", "--out", path.to_str().unwrap()]);
    assert!(first.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let arg = format!("@{}", path.display());
    let again = stallings(&["core", &arg]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);

    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"rank":2,"generators":["ab","aBA"]}"#).unwrap();
    let from_spec = json(&["invariants", &format!("@{}", spec.display())]);
    assert_eq!(from_spec["rank"], 2);
}

#[test]
fn invariants_documents() {
    let v = json(&["invariants", "ab"]);
    assert_eq!((v["H"].as_u64(), v["n1"].as_u64(), v["n2"].as_u64()), (Some(2), Some(1), Some(1)));
    assert_eq!(v["index"], "infinite");
    assert!(v["galois"].is_null());
    let k = json(&["invariants", "aa,b,abA"]);
    assert_eq!(k["index"], 2);
    assert_eq!(k["galois"], true);
    assert_eq!(json(&["index", "a,b"])["index"], 1);
}

#[test]
fn member_and_witness() {
    assert_eq!(json(&["member", "ab", "ab"])["member"], true);
    assert_eq!(json(&["member", "ab", "ba"])["member"], false);
    assert_eq!(json(&["member", "ab", ""])["member"], true);
    assert_eq!(json(&["witness", "a", "a"])["g"], "b");
}

#[test]
fn galois_command() {
    let g = json(&["galois", "aa,bb,abA,baB"]);
    assert_eq!(g["galois"], false);
    assert!(g["witness"]["word"].is_string());
    assert_eq!(json(&["galois", "a,b"])["galois"], true);
    assert_eq!(stallings(&["galois", "ab"]).status.code(), Some(2));
}

#[test]
fn intersect_bound_join() {
    let i = json(&["intersect", "a,baB", "a,baB"]);
    assert_eq!(i["sum_rk_minus_1"], 1);
    let nontrivial = i["components"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["simply_connected"] == false)
        .count();
    assert_eq!(nontrivial, 3);
    let b = json(&["bound", "a,baB", "a,baB"]);
    assert_eq!(b["exact_sum"], 1);
    assert_eq!(b["paper_bound_best"], 1);
    let j = json(&["join", "aa", "aaa"]);
    assert_eq!(j, json(&["core", "a"]));
}

#[test]
fn complete_and_family() {
    let c = json(&["complete", "a", "--avoid", "b"]);
    assert!(c["index"].as_u64().unwrap() <= 2);
    assert_eq!(stallings(&["complete", "a", "--avoid", "aA"]).status.code(), Some(2));
    let f = json(&["family", "5"]);
    let inv = &f["invariants"];
    assert_eq!(
        (inv["H"].as_u64(), inv["n1"].as_u64(), inv["n2"].as_u64(), inv["rank"].as_u64()),
        (Some(5), Some(0), Some(1), Some(5))
    );
    assert_eq!(f["bound"]["paper_bound_i1"], 16);
    assert_eq!(stallings(&["family", "1"]).status.code(), Some(2));
}

#[test]
fn excise_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("excise.json");
    fs::write(
        &path,
        r#"{"graph":{"vertices":[0,1],"darts":[
            {"id":0,"inv":1,"src":0},{"id":1,"inv":0,"src":1},
            {"id":2,"inv":3,"src":0},{"id":3,"inv":2,"src":1},
            {"id":4,"inv":5,"src":0},{"id":5,"inv":4,"src":1}]},
           "tree":[0],"root":0,"loops":[[0,3],[4,1]]}"#,
    )
    .unwrap();
    let v = json(&["excise", path.to_str().unwrap()]);
    assert_eq!(v["words"], serde_json::json!(["A", "b"]));
    assert_eq!(v["rank"], 2);
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(stallings(&["core", "abc"]).status.code(), Some(2));
    assert_eq!(stallings(&["member", "ab", "a1"]).status.code(), Some(2));
    assert_eq!(stallings(&["invariants", ""]).status.code(), Some(2));
    assert_eq!(stallings(&["witness", "a,b", "a"]).status.code(), Some(2));
}

#[test]
fn samples_are_seeded() {
    let a = stallings(&["sample", "--seed", "1", "--count", "5"]);
    let b = stallings(&["sample", "--seed", "1", "--count", "5"]);
    let c = stallings(&["sample", "--seed", "2", "--count", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_stallings"))
        .args(["sample", "--seed", "2", "--count", "5"])
        .env("STALLINGS_SEED", "1")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let complete = json(&["sample", "--complete", "2", "--seed", "1", "--count", "3"]);
    for c in complete.as_array().unwrap() {
        assert_eq!(c["vertices"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn verify_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bounds.csv");
    let svg = dir.path().join("bounds.svg");
    let args = [
        "verify",
        "--count",
        "60",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ];
    let out = stallings(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["passed"], true);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("rk1,rk2,H1,n11,n12,H2,n21,n22,exact,paper_i1,paper_i2,neumann,burns,tardos,dicks")
    );
    assert_eq!(lines.count(), 60);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let again = stallings(&args);
    assert_eq!(out.stdout, again.stdout);
    assert_eq!(fs::read_to_string(&csv).unwrap(), text);
}

#[test]
fn verify_catches_mutant() {
    let out = stallings(&["verify", "--count", "40", "--mutant", "skip-n2"]);
    assert_eq!(out.status.code(), Some(1));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rank = summary["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "rank_identity")
        .unwrap();
    assert!(rank["failed"].as_u64().unwrap() > 0);
}

#[test]
fn verify_defaults() {
    let out = stallings(&["verify"]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["count"], 200);
}
