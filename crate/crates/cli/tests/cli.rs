use std::process::{Command, Output};

fn syzygy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn plane_cubic_passes() {
    let o = syzygy(&["plane", "--degree", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("overall: PASS"));
}

#[test]
fn csv_output() {
    let o = syzygy(&["plane", "-d", "3", "--seed", "1", "--format", "csv", "--checks", "surface_threshold"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("table,prime,p,q,dim"));
    assert!(out.lines().any(|l| l.ends_with(",3,1,3")));
}

#[test]
fn structured_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = syzygy(&[
        "hirzebruch",
        "-e",
        "1",
        "-k",
        "3",
        "-m",
        "4",
        "--seed",
        "2",
        "--format",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["config"]["scenario"]["kind"], "hirzebruch");
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quadric.toml");
    let o = syzygy(&["quadric-nodal", "-k", "3", "-m", "3", "--gamma", "1", "--seed", "4", "--print-config"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = syzygy(&["--config", path.to_str().unwrap(), "--checks", "genus,dim_v"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("[PASS] dim_v"));
}

#[test]
fn missing_seed_is_a_config_error() {
    let o = syzygy(&["plane", "-d", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constraint_violations_are_config_errors() {
    assert_eq!(syzygy(&["plane", "-d", "2", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(syzygy(&["quadric-nodal", "-k", "3", "-m", "3", "-g", "2", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(syzygy(&["plane", "-d", "3", "--seed", "1", "--prime", "auto:8"]).status.code(), Some(2));
    assert_eq!(syzygy(&["plane", "-d", "3", "--seed", "1", "--prime", "100"]).status.code(), Some(2));
    assert_eq!(syzygy(&["plane", "-d", "3", "--seed", "1", "--checks", "bogus"]).status.code(), Some(2));
}

#[test]
fn point_divisor_is_unsupported() {
    let o = syzygy(&["add-divisor", "-e", "0", "-k", "3", "-m", "4", "--point", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generic_drop_check"));
}

#[test]
fn zero_strand_is_a_config_error() {
    let o = syzygy(&["project", "-d", "4", "--strand", "7", "--points", "1", "--samples", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn colinear_sweep_is_informational() {
    let o = syzygy(&["plane", "-d", "4", "--seed", "1", "--colinear-sweep", "4", "--checks", "genus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("colinear"));
    let alias = syzygy(&["plane", "-d", "4", "--seed", "1", "--problem-5-4", "4", "--checks", "genus"]);
    assert_eq!(stdout(&alias), stdout(&o));
}

#[test]
fn guardrail_refuses_oversized_strands() {
    let o = syzygy(&["plane", "-d", "6", "--seed", "1", "--checks", "surface_threshold"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("force"));
}

#[test]
fn subcommand_and_config_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.toml");
    std::fs::write(&path, "seed = 1\n[scenario]\nkind = \"plane_curve\"\nd = 3\n").unwrap();
    let o = syzygy(&["plane", "-d", "3", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = syzygy(&["--config", path.to_str().unwrap(), "--threads", "2", "--checks", "genus"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
