use std::process::{Command, Output};

use serde_json::Value;

fn permagic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permagic"))
        .args(args)
        .env_remove("PERMAGIC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = permagic(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn qutrit_symmetric_group_pipeline() {
    let v = json(&["--mode", "classify", "--group", "S3", "--format", "json"]);
    let run = &v[0]["run"];
    assert_eq!(run["report"]["counts"]["total"], 12);
    assert_eq!(run["ray_clique_profile"]["3"], 5);
    assert_eq!(run["pentagons"], 3);
    assert!(run["census"]["pentagons"].as_array().unwrap().iter().all(|p| p["witness"]["contextual"] == true));
}

#[test]
fn ququart_generators_give_twenty_rays() {
    let v = json(&["--mode", "classify", "--dim", "4", "--generators", "2,3,1,4;1,3,4,2", "--format", "json"]);
    assert_eq!(v[0]["name"], "A4");
    assert_eq!(v[0]["run"]["report"]["counts"]["total"], 20);
    assert_eq!(v[0]["run"]["pentagons"], 24);
}

#[test]
fn cycle_notation_is_accepted() {
    let v = json(&["--mode", "classify", "--dim", "4", "--notation", "cycle", "--generators", "(1,2,3);(2,3,4)", "--format", "json"]);
    assert_eq!(v[0]["run"]["report"]["group"]["order"], 12);
}

#[test]
fn qubit_classify_reports_reference_states_only() {
    let v = json(&["--mode", "classify", "--dim", "2", "--format", "json"]);
    let states: Vec<&str> = v["reference_states"].as_array().unwrap().iter().map(|s| s["state"].as_str().unwrap()).collect();
    assert_eq!(states, ["zero", "one", "plus", "minus_i", "H", "T"]);
}

#[test]
fn search_finds_two_alternating_copies() {
    let v = json(&["--mode", "search", "--dim", "4", "--format", "json"]);
    assert_eq!(v["copies_by_name"]["A4"], 2);
    assert_eq!(v["distinct_groups"].as_array().unwrap().len(), 1);
}

#[test]
fn wigner_of_the_strange_state() {
    let v = json(&["--mode", "wigner", "--state", "0,1,-1", "--format", "json"]);
    assert_eq!(v["results"][0]["sum_negativity"], "1/3");
    let with_var = json(&["--mode", "wigner", "--state", "1,w,w^2,w^3,w^4,w^5", "--var", "w=E(6)", "--construction", "tensor", "--format", "json"]);
    assert_eq!(with_var["dimension"], 6);
}

#[test]
fn table2_matches_and_exits_zero() {
    let out = permagic(&["--mode", "table2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.starts_with(b"dimension,"));
    let v = json(&["--mode", "table2", "--format", "json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 26);
    assert!(rows.iter().all(|r| !r["matched_by"].as_array().unwrap().is_empty()));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["--mode", "classify", "--dim", "12"][..],
        &["--mode", "search", "--dim", "4", "--format", "dot"],
        &["--mode", "classify", "--dim", "4", "--generators", "1,1,2,3"],
        &["--mode", "classify", "--group", "NoSuchGroup"],
        &["--mode", "wigner", "--state", "0,1,-1", "--dim", "4"],
        &["--mode", "nonsense"],
        &["--mode", "search"],
    ] {
        assert_eq!(permagic(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_three() {
    let capped = permagic(&["--mode", "classify", "--dim", "4", "--generators", "2,3,1,4;1,3,4,2", "--order-cap", "5"]);
    assert_eq!(capped.status.code(), Some(3));
    let slow = permagic(&["--mode", "search", "--dim", "9", "--budget-seconds", "0.2"]);
    assert_eq!(slow.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&slow.stderr).contains("budget"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--mode", "classify", "--group", "A4", "--format", "json"][..],
        &["--mode", "context", "--group", "S3", "--format", "dot"],
        &["--mode", "table2", "--dim", "3,5", "--format", "json"],
    ] {
        let a = permagic(args);
        let b = permagic(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_directory_receives_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = permagic(&["--mode", "classify", "--group", "S3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    for ext in ["json", "txt", "csv", "dot"] {
        assert!(dir.path().join(format!("classify-d3.{ext}")).exists(), "{ext}");
    }
}

#[test]
fn cache_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_permagic"))
        .args(["--mode", "classify", "--group", "S3"])
        .env("PERMAGIC_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some());
}

#[test]
fn props_report_covers_each_construction() {
    let v = json(&["--mode", "props", "--dim", "5,6", "--samples", "3", "--format", "json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["hermitian"], true);
    assert_eq!(rows[1]["hermitian"], false);
    assert_eq!(rows[2]["construction"], "tensor");
}
