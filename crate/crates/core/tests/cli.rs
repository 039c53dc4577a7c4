use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cabdlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cabdlog"))
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn genus_zero_group_is_trivial() {
    let out = cabdlog(&["group-structure", "--curve", path_str(&data("g0_f3.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["h"], "1");
    assert_eq!(v["genus"], 0);
    assert_eq!(v["invariant_factors"].as_array().unwrap().len(), 0);
}

#[test]
fn usage_errors_exit_2() {
    let out = cabdlog(&["dlog"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "error");
    assert_eq!(v["reason"], "usage");
    assert_eq!(cabdlog(&["dlog", "--precomp", "/nonexistent/pre.json"]).status.code(), Some(2));
    assert_eq!(cabdlog(&["oracle", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(cabdlog(&["--help"]).status.code(), Some(0));
}

#[test]
fn singular_curve_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("singular.json");
    std::fs::write(&curve, r#"{"p":3,"n":2,"d":17,"monomials":[[17,0,1],[1,0,1],[0,0,1]]}"#).unwrap();
    let out = cabdlog(&["oracle", "--curve", path_str(&curve)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "error");
}

#[test]
fn oracle_reports_counts_and_class_number() {
    let out = cabdlog(&["oracle", "--curve", path_str(&data("g3_f5.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["N"], serde_json::json!([6, 20, 126]));
    assert_eq!(v["L"], serde_json::json!(["1", "0", "-3", "0", "-15", "0", "125"]));
    assert_eq!(v["h"], "108");
}

#[test]
fn elliptic_class_number_is_the_point_count() {
    for name in ["g1_f2.json", "g1_f7.json"] {
        let curve = data(name);
        let oracle = json(&cabdlog(&["oracle", "--curve", path_str(&curve)]));
        let n1 = oracle["N"][0].as_u64().unwrap();
        let (b, m) = if name == "g1_f2.json" { ("1", "2") } else { ("2", "3") };
        let out = cabdlog(&["group-structure", "--curve", path_str(&curve), "--B", b, "--m", m, "--seed", "1"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["h"], n1.to_string());
    }
}

#[test]
fn factor_base_listing() {
    let out = cabdlog(&["factor-base", "--curve", path_str(&data("g1_f2.json")), "--B", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["t"], 2);
    assert_eq!(v["ramified"].as_array().unwrap().len(), 1);
    assert!(v["places"].as_array().unwrap().iter().all(|p| p["deg"] == 1));
}

#[test]
fn group_structure_dlog_and_transcript_replay() {
    let dir = tempfile::tempdir().unwrap();
    let pre = dir.path().join("pre.json");
    let tr = dir.path().join("tr.json");
    let curve = data("g3_f5.json");
    let out = cabdlog(&[
        "group-structure", "--curve", path_str(&curve), "--B", "3", "--m", "2", "--seed", "1", "--out", path_str(&pre),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let gs: Value = serde_json::from_str(&std::fs::read_to_string(&pre).unwrap()).unwrap();
    assert_eq!(gs["h"], "108");
    assert_eq!(gs["invariant_factors"], serde_json::json!(["3", "3", "12"]));
    assert!(gs["stats"].get("seconds").is_none());

    let out = cabdlog(&[
        "dlog", "--precomp", path_str(&pre), "--d1", "random:4", "--d2", "mul:77", "--seed", "2", "--transcript", path_str(&tr),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let order: u64 = v["order"].as_str().unwrap().parse().unwrap();
    let x: u64 = v["x"].as_str().unwrap().parse().unwrap();
    assert_eq!(108 % order, 0);
    assert_eq!(x, 77 % order);

    let out = cabdlog(&["verify-transcript", "--precomp", path_str(&pre), "--transcript", path_str(&tr)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["x"], x.to_string());

    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(&tr).unwrap()).unwrap();
    t["x"] = Value::String(((x + 1) % order).to_string());
    std::fs::write(&tr, t.to_string()).unwrap();
    let out = cabdlog(&["verify-transcript", "--precomp", path_str(&pre), "--transcript", path_str(&tr)]);
    assert_eq!(out.status.code(), Some(7));
}

#[test]
fn too_few_relations_is_a_rank_failure() {
    let out = cabdlog(&[
        "group-structure", "--curve", path_str(&data("g3_f5.json")), "--B", "3", "--m", "2", "--relations", "22",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["reason"], "rank-failure");
}

#[test]
fn tiny_budget_is_exhausted() {
    let out = cabdlog(&[
        "group-structure", "--curve", path_str(&data("g3_f5.json")), "--B", "3", "--m", "2", "--budget", "10",
    ]);
    assert_eq!(out.status.code(), Some(6));
}
