use std::process::{Command, Output};

fn dhseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = dhseq(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

#[test]
fn generate_emits_bit_string() {
    assert_eq!(stdout_of(&["generate", "--p", "3", "--n", "2"]).trim(), "101001101");
    assert_eq!(stdout_of(&["generate", "--p", "5", "--n", "1"]).trim(), "10110");
}

#[test]
fn generate_emits_hex() {
    let hex = stdout_of(&["generate", "--p", "3", "--n", "2", "--format", "hex"]);
    assert_eq!(hex.trim(), "165");
}

#[test]
fn generate_emits_json() {
    let v = json_of(&["generate", "--p", "3", "--n", "2", "--format", "json"]);
    assert_eq!(v["bits"], "101001101");
    assert_eq!(v["p"], 3);
    assert_eq!(v["n"], 2);
}

#[test]
fn classes_emits_partition() {
    let v = json_of(&["classes", "--p", "3", "--n", "2"]);
    assert_eq!(v["classes"]["D0"], serde_json::json!([1, 4, 7]));
    assert_eq!(v["classes"]["D1"], serde_json::json!([2, 5, 8]));
    assert_eq!(v["classes"]["R"], serde_json::json!([0, 3, 6]));
    assert_eq!(v["C1"], serde_json::json!([0, 2, 5, 6, 8]));
}

#[test]
fn complexity_reports_reduced_fraction() {
    let v = json_of(&["complexity", "--p", "5", "--n", "1"]);
    assert_eq!(v["S2"], "13");
    assert_eq!(v["g"], "1");
    assert_eq!(v["phi2"], 4);
    assert_eq!(v["bound"], 3);
    assert_eq!(v["bound_ok"], true);
}

#[test]
fn det_cross_validates_both_routes() {
    let v = json_of(&["det", "--p", "3", "--n", "2"]);
    assert_eq!(v["det_closed"], "35");
    assert_eq!(v["det_resultant"], "35");
    assert_eq!(v["match"], true);
    assert_eq!(v["divisibility_ok"], true);
}

#[test]
fn det_single_method_is_reduced() {
    let v = json_of(&["det", "--p", "5", "--n", "2", "--method", "closed"]);
    assert_eq!(v["method"], "closed");
    assert_eq!(v["det"], "12493");
    assert!(v.get("det_resultant").is_none());
}

#[test]
fn verify_all_suites_pass() {
    let out = dhseq(&["verify", "--p", "3", "--n", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_marks_skipped_checks() {
    let v = json_of(&[
        "verify", "--p", "3", "--n", "3", "--suite", "adic", "--resultant-cap", "20",
    ]);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    let det = checks.iter().find(|c| c["name"] == "det_match").unwrap();
    assert_eq!(det["passed"], true);
    assert!(det["detail"].as_str().unwrap().starts_with("skipped"));
}

#[test]
fn rejects_non_odd_prime() {
    for p in ["2", "4", "9", "1"] {
        let out = dhseq(&["generate", "--p", p, "--n", "1"]);
        assert_eq!(out.status.code(), Some(2), "p = {p}");
    }
}

#[test]
fn rejects_period_over_cap() {
    let out = dhseq(&["generate", "--p", "3", "--n", "2", "--classtable-cap", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dhseq(&["det", "--p", "3", "--n", "5", "--method", "resultant"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_has_frozen_header_and_rows() {
    let csv = stdout_of(&["sweep", "--p", "3", "--n-max", "2"]);
    let lines: Vec<&str> = csv.trim().lines().collect();
    assert_eq!(
        lines[0],
        "p,n,N,S2,gcd,phi2,bound,bound_ok,det_match,gauss_ok,gcd_is_one,fcsr_ok"
    );
    assert_eq!(lines[1], "3,1,3,5,1,2,1,true,true,true,true,true");
    assert_eq!(lines[2], "3,2,9,357,7,6,5,true,true,true,false,true");
    assert_eq!(lines.len(), 3);
}

#[test]
fn sweep_orders_explicit_primes() {
    let csv = stdout_of(&["sweep", "--p", "7", "--p", "3", "--n-max", "1"]);
    let lines: Vec<&str> = csv.trim().lines().collect();
    assert!(lines[1].starts_with("3,1,"));
    assert!(lines[2].starts_with("7,1,"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("dhseq-cli-test-{}.txt", std::process::id()));
    let out = dhseq(&["generate", "--p", "3", "--n", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "101001101\n");
    std::fs::remove_file(&path).unwrap();
}
