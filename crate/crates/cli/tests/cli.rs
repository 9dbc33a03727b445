use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgesync")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests").join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_g1() {
    let out = bin(&["analyze", &fixture("g1")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["sb"], false);
    assert_eq!(v["l1"], 1);
    assert_eq!((v["gamma"].as_u64(), v["xi"].as_u64()), (Some(1), Some(1)));
    assert_eq!(v["spectral"]["rank_es"], 5);
    assert_eq!(v["spectral"]["rank_es_in"], 4);
    assert_eq!(v["leaders"], serde_json::json!([5]));
    assert_eq!(v["class"], "IntervalBipartiteConsensus");
}

#[test]
fn analyze_g0_groups_and_matrices() {
    let dir = scratch("g0-matrices");
    let out = bin(&["analyze", &fixture("g0"), "--export-matrices", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["l1"].as_u64(), v["l2sb"].as_u64(), v["l2sub"].as_u64()), (Some(1), Some(1), Some(1)));
    assert_eq!(v["groups"].as_array().unwrap().len(), 3);
    let ls = std::fs::read_to_string(dir.join("ls.csv")).unwrap();
    assert!(ls.starts_with("v1,v2,v3,v4,v5,v6,v7,v8,v9\n"));
    assert_eq!(ls.lines().count(), 10);
    let es = std::fs::read_to_string(dir.join("es.csv")).unwrap();
    assert_eq!(es.lines().next().unwrap().split(',').count(), 10);
    assert!(dir.join("le.csv").exists() && dir.join("es_in.csv").exists());
}

#[test]
fn malformed_input_is_a_config_error() {
    let dir = scratch("malformed");
    let p = dir.join("bad.json");
    std::fs::write(&p, "{\"n\": 3, \"edges\": [").unwrap();
    assert_eq!(bin(&["analyze", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["analyze", "/nonexistent/graph.json"]).status.code(), Some(2));
}

#[test]
fn digon_sign_asymmetry_is_rejected() {
    let dir = scratch("digon");
    let p = dir.join("digon.json");
    std::fs::write(
        &p,
        r#"{"n": 2, "edges": [{"from": 1, "to": 2, "sign": 1}, {"from": 2, "to": 1, "sign": -1}]}"#,
    )
    .unwrap();
    let out = bin(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("digon sign asymmetry at (1,2)/(2,1)"));
}

#[test]
fn wrong_initial_state_length() {
    let dir = scratch("x0");
    let out = bin(&["simulate", &fixture("g1"), "--x0", "1,2", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_all_outputs() {
    let dir = scratch("simulate-g1");
    let out = bin(&[
        "simulate",
        &fixture("g1"),
        "--x0=3.5,4,-2,-6.5,5.5",
        "--record-every",
        "100",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let traj = std::fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    let header = traj.lines().next().unwrap();
    assert!(header.starts_with("t,x1,") && header.ends_with(",V"));
    assert_eq!(traj.lines().count(), 1 + 101);
    let verdict: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["overall_pass"], true);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["certified"], true);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["k1"], 4.0);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 5);
}

#[test]
fn kronecker_solver_selectable() {
    let dir = scratch("kron");
    let out = bin(&["simulate", &fixture("g3"), "--lyapunov", "kronecker", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["method"], "kronecker");
    assert_eq!(cert["alphas"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_flags_are_config_errors() {
    let dir = scratch("flags");
    let d = dir.to_str().unwrap();
    assert_eq!(bin(&["simulate", &fixture("g1"), "--q", "diag:1,2", "--out", d]).status.code(), Some(2));
    assert_eq!(bin(&["simulate", &fixture("g1"), "--alpha", "1,2,3", "--out", d]).status.code(), Some(2));
    assert_eq!(bin(&["simulate", &fixture("g1"), "--dt", "0", "--out", d]).status.code(), Some(2));
    assert_eq!(bin(&["analyze", &fixture("g1"), "--rank-rtol", "-1"]).status.code(), Some(2));
}

#[test]
fn infeasible_random_request() {
    let out = bin(&["random", "--roots", "5", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_round_trips_through_analyze() {
    let args = ["random", "--n", "9", "--roots", "1", "--sb-sccs", "1", "--sub-sccs", "1", "--seed", "1"];
    let a = bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, bin(&args).stdout);
    let dir = scratch("random");
    let p = dir.join("g.json");
    std::fs::write(&p, &a.stdout).unwrap();
    let v = json(&bin(&["analyze", p.to_str().unwrap()]));
    assert_eq!((v["l1"].as_u64(), v["l2sb"].as_u64(), v["l2sub"].as_u64()), (Some(1), Some(1), Some(1)));
}

#[test]
fn verify_fixtures() {
    let names = ["g1", "g2", "g3", "g4"].map(fixture);
    let mut args = vec!["verify"];
    args.extend(names.iter().map(String::as_str));
    let out = bin(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 4);
    let g3 = &v[2];
    let ns = g3["findings"].as_array().unwrap().iter().find(|f| f["name"] == "null-space-relation").unwrap();
    assert_eq!(ns["gated"], false);
}

#[test]
fn corrupted_sign_is_reanalyzed() {
    // G3 with its ninth edge flipped: the leader cycle becomes unbalanced.
    let text = std::fs::read_to_string(fixture("g3")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let s = doc["edges"][8]["sign"].as_i64().unwrap();
    doc["edges"][8]["sign"] = Value::from(-s);
    let dir = scratch("corrupted");
    let p = dir.join("g3-flipped.json");
    std::fs::write(&p, doc.to_string()).unwrap();
    let out = bin(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a = json(&bin(&["analyze", p.to_str().unwrap()]));
    assert_eq!((a["l1"].as_u64(), a["l2sb"].as_u64(), a["l2sub"].as_u64()), (Some(1), Some(0), Some(1)));
}

#[test]
fn help_lists_defaults() {
    let out = bin(&["simulate", "--help"]);
    let h = String::from_utf8_lossy(&out.stdout);
    for d in ["[default: 4]", "[default: identity]", "[default: 1]", "[default: 10]", "[default: 1e-3]"] {
        assert!(h.contains(d), "missing {d}");
    }
}
