use std::process::{Command, Output};

use serde_json::Value;

fn antisymq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antisymq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const DET_T: &str = r#"{"side":0,"terms":[{"coeff":[1,0],"orbitals":[0,1]}]}"#;
const DET_P: &str = r#"{"side":1,"terms":[{"coeff":[1,0],"orbitals":[0,1]}]}"#;

#[test]
fn generate_writes_qasm_and_reports_uncompute() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.qasm");
    let o = antisymq(&["generate", "--nt", "2", "--np", "2", "--n", "2", "--variant", "shared", "--qasm", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let qasm = std::fs::read_to_string(&path).unwrap();
    assert!(qasm.starts_with("OPENQASM 3.0;"));
    assert!(stdout(&o).contains("uncompute cnots=4"));
}

#[test]
fn generate_reports_eight_swaps_for_three_two() {
    let o = antisymq(&["generate", "--nt", "3", "--np", "2", "--n", "3", "--variant", "shared"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let swaps = out.lines().find(|l| l.trim_start().starts_with("swaps")).unwrap();
    assert_eq!(swaps.split_whitespace().last(), Some("8"));
}

#[test]
fn generate_json_and_describe() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let o = antisymq(&["generate", "--nt", "2", "--np", "1", "--n", "2", "--describe", "--json", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dicke ancillae"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["circuit"]["num_qubits"], 9);
}

#[test]
fn projectile_larger_than_target_is_a_usage_error() {
    let o = antisymq(&["generate", "--nt", "1", "--np", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N_p <= N_T"));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(antisymq(&["generate", "--nt", "x"]).status.code(), Some(2));
}

#[test]
fn simulate_determinants_matches_oracle() {
    let o = antisymq(&["simulate", "--nt", "2", "--np", "2", "--n", "2", "--target", DET_T, "--projectile", DET_P]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = json(&o);
    assert!(r["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert!(r["antisymmetry_residual"].as_f64().unwrap() <= 1e-10);
    assert!(r.get("wall_time_s").is_none());
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = ["simulate", "--nt", "2", "--np", "1", "--n", "3", "--seed", "7"];
    let a = antisymq(&args);
    let b = antisymq(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn parallel_and_shared_agree() {
    let o = antisymq(&["simulate", "--nt", "2", "--np", "2", "--n", "2", "--seed", "3", "--variant", "parallel", "--compare", "shared"]);
    assert!(o.status.success());
    assert!(json(&o)["comparison"]["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
}

#[test]
fn simulate_names_the_failing_precondition() {
    let wrong_side = r#"{"side":1,"terms":[{"coeff":[1,0],"orbitals":[0,1]}]}"#;
    let o = antisymq(&["simulate", "--nt", "2", "--np", "1", "--n", "2", "--target", wrong_side]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("side convention"), "{}", stderr(&o));
}

#[test]
fn verify_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let o = antisymq(&["verify", "--trials", "1", "--report", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn corrupted_schedule_fails_verification() {
    let o = antisymq(&["verify", "--max-nt", "2", "--max-n", "2", "--trials", "0", "--corrupt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pattern"), "{}", stderr(&o));
}

#[test]
fn estimate_rows_match_known_counts() {
    let o = antisymq(&["estimate", "--max-nt", "4", "--max-np", "3", "--json"]);
    assert!(o.status.success());
    let rows = json(&o);
    let row = |nt: u64, np: u64| {
        rows.as_array()
            .unwrap()
            .iter()
            .find(|r| r["n_target"] == nt && r["n_projectile"] == np)
            .unwrap()
            .clone()
    };
    assert_eq!(row(3, 3)["swaps"], 9);
    assert_eq!(row(3, 2)["swaps"], 8);
    assert_eq!(row(3, 2)["n_perm"], 10);
    for r in rows.as_array().unwrap() {
        assert!(r["depth_parallel"].as_u64() <= r["depth_sequential"].as_u64());
    }
}
