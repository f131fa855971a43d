use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn jobs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn run(command: &str, job: &str, extra: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_birat"))
        .arg(command)
        .arg("--job")
        .arg(jobs_dir().join(job))
        .args(extra)
        .output()
        .expect("binary runs");
    let report: Value = serde_json::from_slice(&out.stdout).expect("report is json");
    (out.status.code().unwrap(), report)
}

#[test]
fn exit_codes_follow_the_verdict() {
    let (code, r) = run("check-regular", "check_regular_conic.json", &[]);
    assert_eq!((code, r["verdict"].as_str()), (0, Some("yes")));
    let (code, r) = run("check-regular", "check_regular_quadric_projection.json", &[]);
    assert_eq!((code, r["verdict"].as_str()), (1, Some("no")));
    let (code, r) = run("toy-solve", "toy_solve_conic.json", &[]);
    assert_eq!((code, r["verdict"].as_str()), (2, Some("inconclusive")));
    let (code, r) = run("check-regular", "malformed_polynomial.json", &[]);
    assert_eq!(code, 3);
    assert!(r["reason"].as_str().unwrap().contains("position 8"));
}

#[test]
fn report_embeds_version_and_caps() {
    let (_, r) = run("groebner", "groebner_cyclic3.json", &["--budget-spairs", "77"]);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["caps"]["spairs"], 77);
    assert_eq!(r["result"]["basis"][2], "c^3 - 1");
}

#[test]
fn tiny_budget_is_inconclusive() {
    let (code, r) = run("groebner", "groebner_cyclic3.json", &["--budget-spairs", "0"]);
    assert_eq!(code, 2, "{r}");
}

#[test]
fn wrong_subcommand_is_an_input_error() {
    let (code, r) = run("certify", "groebner_cyclic3.json", &[]);
    assert_eq!(code, 3);
    assert!(r["reason"].as_str().unwrap().contains("groebner"));
}

#[test]
fn prime_field_override() {
    let (code, r) = run("groebner", "groebner_cyclic3.json", &["--field", "fp:3"]);
    assert_eq!(code, 0);
    // over F_3 the cube roots of unity collapse: c^3 - 1 = (c - 1)^3
    assert_eq!(r["result"]["basis"][2], "c^3 + 2");
}

#[test]
fn output_is_deterministic() {
    let a = run("construct-witness", "construct_witness_conic.json", &[]);
    let b = run("construct-witness", "construct_witness_conic.json", &[]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn batch_keeps_order_and_reports_worst_code() {
    let dir = std::env::temp_dir().join(format!("birat-batch-{}", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_birat"))
        .args(["check-regular", "--jobs", "2", "--out"])
        .arg(&dir)
        .arg("--job")
        .arg(jobs_dir().join("check_regular_conic.json"))
        .arg(jobs_dir().join("check_regular_quadric_projection.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let read = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
    };
    assert_eq!(read("check_regular_conic.report.json")["verdict"], "yes");
    assert_eq!(read("check_regular_quadric_projection.report.json")["verdict"], "no");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn stored_witness_verifies() {
    let (code, r) = run("verify-witness", "verify_witness_line.json", &[]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["holds"], true);
}
