use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn glcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glcover")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = glcover(&all);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("glcover-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn goldens_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/goldens")
}

#[test]
fn census_reports_cover_and_regimes() {
    let v = json(&["census", "--n", "2", "--q", "3"]);
    assert_eq!(v["class_count"], 3);
    assert_eq!(v["a_poly"], serde_json::json!(["1", "1", "1"]));
    assert_eq!(v["at_q"]["cover"], "13");
    assert_eq!(v["at_q"]["omega"]["value"], "13");
    let two = json(&["census", "--n", "3", "--q", "2"]);
    assert_eq!(two["at_q"]["cover_regime"], "upper bound");
    assert!(two["at_q"]["omega"]["value"].is_null());
    let table = json(&["census", "--n", "4", "--table"]);
    assert_eq!(table.as_array().unwrap().len(), 4);
}

#[test]
fn series_expansions() {
    let rf = json(&["series", "expand", "--which", "F1", "--form", "sum", "--order", "3"]);
    assert_eq!(rf.as_array().unwrap().len(), 4);
    assert_eq!(rf[0]["num"], serde_json::json!(["1"]));
    let exp = json(&["series", "expand", "--which", "F1", "--form", "exp", "--order", "4", "--u-order", "12"]);
    let prod = json(&["series", "expand", "--which", "F1", "--form", "product", "--order", "4", "--u-order", "12"]);
    assert_eq!(exp, prod);
    let out = glcover(&["series", "expand", "--which", "F2", "--form", "sum", "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limit_commands() {
    let v = json(&["limit", "lq", "--q", "2", "--terms", "30"]);
    for key in ["lo", "hi", "decimal_lo", "decimal_hi"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["decimal_lo"].as_str().unwrap().starts_with("278.98"));
    let c = json(&["limit", "check", "--q", "5"]);
    assert_eq!(c["lower_poly"], "holds");
    assert_eq!(c["upper_poly"], "holds");
    let out = glcover(&["limit", "lq", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_tasks_pass() {
    for task in ["cyclic-proportion", "centralizer-count", "regular-unipotent", "jm-check"] {
        let v = json(&["oracle", "--n", "2", "--q", "3", "--task", task]);
        assert_eq!(v["pass"], true, "{task}");
    }
    let v = json(&["oracle", "--n", "2", "--q", "2", "--task", "cyclic-proportion"]);
    assert_eq!(v["report"]["proportion"], "5/6");
    let r = json(&["oracle", "--n", "4", "--q", "2", "--task", "remark-matrix"]);
    assert_eq!(r["report"]["centralizer_order"], 16);
}

#[test]
fn oracle_refuses_over_budget() {
    let out = glcover(&["oracle", "--n", "3", "--q", "4", "--task", "centralizer-count"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let small = glcover(&["--budget", "100", "oracle", "--n", "2", "--q", "5", "--task", "cyclic-proportion"]);
    assert_eq!(small.status.code(), Some(2));
}

#[test]
fn clique_omega_with_witness() {
    let dir = scratch_dir("witness");
    let path = dir.join("w.txt");
    let v = json(&["clique", "omega", "--n", "2", "--q", "3", "--emit-witness", path.to_str().unwrap()]);
    assert_eq!(v["omega"], 13);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["seed_size"], 13);
    assert_eq!(v["upper_bound"], 13);
    let lines: Vec<String> = std::fs::read_to_string(&path).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 13);
    assert!(lines.iter().all(|l| l.split(' ').count() == 4));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_fast_passes() {
    let v = json(&["verify", "--level", "fast"]);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert!(checks.iter().all(|c| c["id"].as_str().is_some()));
}

#[test]
fn tampered_golden_fails_verification() {
    let dir = scratch_dir("tampered");
    for f in ["table1.json", "phi_counts.json", "b_n.json", "omega.json"] {
        std::fs::copy(goldens_dir().join(f), dir.join(f)).unwrap();
    }
    let ok = glcover(&["verify", "--goldens", dir.to_str().unwrap()]);
    assert!(ok.status.success());
    let table = std::fs::read_to_string(dir.join("table1.json")).unwrap();
    let tampered = table.replace("\"4\": 3,", "\"4\": 4,");
    assert_ne!(table, tampered);
    std::fs::write(dir.join("table1.json"), tampered).unwrap();
    let out = glcover(&["verify", "--goldens", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("census.table1")));
    std::fs::remove_dir_all(dir).ok();
}
