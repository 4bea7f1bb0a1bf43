//! End-to-end runs of the `qroots` binary on the shipped configs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn qroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qroots")).current_dir(root()).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qroots-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_passes_and_writes_report() {
    let out = tmp("hopf.json");
    let o = qroots(&["verify", "hopf", "--config", "configs/a1_l3.conf", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["suite"], "hopf");
    assert!(v.get("wall_time_ms").is_none());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    std::fs::remove_file(out).ok();
}

#[test]
fn reports_are_byte_identical() {
    let a = qroots(&["verify", "pairing", "--config", "configs/a1_l3.conf"]);
    let b = qroots(&["verify", "pairing", "--config", "configs/a1_l3.conf"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let o = qroots(&["verify", "omega", "--config", "configs/a1_l3.conf", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn failing_check_exits_1() {
    let conf = tmp("low.conf");
    std::fs::write(&conf, "type = A1\nell = 3\nht_bound = 2\n").unwrap();
    let o = qroots(&["verify", "hopf", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed[0]["witness"]["panic"].as_str().unwrap().contains("degree bound"));
    std::fs::remove_file(conf).ok();
}

#[test]
fn even_ell_is_rejected_by_condition() {
    let o = qroots(&["verify", "hopf", "--config", "configs/a2_l2.conf"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("condition (a)"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(qroots(&["verify", "nope", "--config", "configs/a1_l3.conf"]).status.code(), Some(2));
    assert_eq!(qroots(&["verify", "hopf", "--config", "configs/missing.conf"]).status.code(), Some(2));
    assert_eq!(qroots(&["dump", "e*g", "--config", "configs/a1_l3.conf"]).status.code(), Some(2));
}

#[test]
fn dump_prints_both_readouts() {
    let o = qroots(&["dump", "e^3", "--config", "configs/a1_l3.conf"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8_lossy(&o.stdout);
    assert_eq!(s, "e^3\ndivided: (v^6 + 2*v^2 + 2*v^-2 + v^-6)*E(3)\n");

    let o = qroots(&["dump", "f*e", "--config", "configs/a1_l3.conf", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["canonical"], "f*e");
    assert_eq!(v["idempotent"], true);
}

#[test]
fn alternate_w0_word_changes_the_summary() {
    let a = qroots(&["verify", "pbw", "--config", "configs/a2_l5.conf"]);
    let b = qroots(&["verify", "pbw", "--config", "configs/a2_alt_l5.conf"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let va: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(va["root_datum"]["w0_word"], serde_json::json!([1, 2, 1]));
    assert_eq!(vb["root_datum"]["w0_word"], serde_json::json!([2, 1, 2]));
}

#[test]
fn lists_suites() {
    let o = qroots(&["suites"]);
    let s = String::from_utf8_lossy(&o.stdout);
    assert_eq!(s.lines().count(), 11);
    assert!(s.lines().any(|l| l == "azumaya"));
}
