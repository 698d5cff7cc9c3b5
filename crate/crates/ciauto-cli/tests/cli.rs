use std::path::PathBuf;

use ciauto_cli::run;
use serde_json::Value;

fn out_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ciauto-cli-{}-{name}.jsonl", std::process::id()))
}

/// Runs `args` writing to a temp file; returns exit status and parsed lines.
fn run_to(name: &str, args: &[&str]) -> (i32, String, Vec<Value>) {
    let path = out_path(name);
    let mut argv = vec!["ciauto"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let code = run(argv);
    let body = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let lines = body.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    (code, body, lines)
}

fn records(lines: &[Value]) -> Vec<&Value> {
    lines.iter().filter(|l| l["kind"] == "record").collect()
}

#[test]
fn theorem_list_exits_zero() {
    let (code, _, lines) = run_to("theorem", &["exceptions", "--n-max", "12", "--emit", "theorem"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = records(&lines).iter().map(|r| r["key"].as_str().unwrap()).collect();
    assert_eq!(
        keys,
        ["(5,2,3)", "(6,2,3)", "(6,2,4)", "(6,3,3)", "(7,2,2,3)", "(7,2,3)", "(8,2,3)", "(8,3,3)", "(9,2,2,3)", "(10,2,3)"]
    );
    assert_eq!(lines[0]["kind"], "header");
    assert_eq!(lines.last().unwrap()["summary"]["passed"], 10);
}

#[test]
fn birres_duality_report() {
    let (code, _, lines) = run_to("birres", &["birres", "--random-maps", "1000", "--seed", "1"]);
    assert_eq!(code, 0);
    let rs = records(&lines);
    assert!(rs.iter().any(|r| r["key"] == "duality" && r["status"] == "passed" && r["data"]["maps"] == 1000));
}

#[test]
fn certify_single_type() {
    let (code, _, lines) = run_to("certify", &["certify", "--n", "5", "--degrees", "3,3", "--p-max", "7"]);
    assert_eq!(code, 0);
    let rs = records(&lines);
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0]["key"], "(5,3,3)");
    assert_eq!(rs[0]["data"]["case"], "equal-degrees");
}

#[test]
fn failed_record_sets_exit_status() {
    let (code, _, lines) = run_to("fail", &["certify", "--n", "5", "--degrees", "2,2,4", "--p-max", "2"]);
    assert_eq!(code, 1);
    assert_eq!(lines.last().unwrap()["summary"]["failed"], 1);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["birres", "--random-maps", "200", "--correspondence-maps", "20", "--seed", "9"];
    let (_, a, _) = run_to("det-a", &args);
    let (_, b, _) = run_to("det-b", &args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let (_, c, _) = run_to("det-c", &seq);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let (_, t1, _) = run_to("det-t1", &["torelli", "--max-ambient", "5"]);
    let (_, t2, _) = run_to("det-t2", &["torelli", "--max-ambient", "5", "--sequential"]);
    assert_eq!(t1, t2);
}

#[test]
fn bad_flags_are_rejected() {
    assert_ne!(run(["ciauto", "frobnicate"]), 0);
    assert_ne!(run(["ciauto", "torelli", "--q", "10"]), 0);
    assert_ne!(run(["ciauto", "varieties", "--budget-points", "0"]), 0);
    assert_ne!(run(["ciauto", "certify", "--n", "5"]), 0);
    assert_ne!(run(["ciauto", "exceptions", "--emit", "lemma45"]), 0);
}
