//! The `cluster-chain` binary end to end.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

use cluster_chain::sweep;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cluster-chain"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SWEEP: &str = r#"{
  "axis1": {"parameter": "jy", "values": [-1.0, 1.0]},
  "axis2": {"parameter": "h", "start": 0.0, "stop": 3.0, "count": 7},
  "fixed": {"jx": 1.0, "n": 40},
  "observables": ["Mz", "C13", "D13"],
  "derivatives": [{"observable": "C13", "with_respect_to": "h"}]
}"#;

#[test]
fn report_prints_all_observables() {
    let o = run(&["report", "--jx", "1", "--jy", "-0.5", "--h", "1.2", "--n", "10", "--ed"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["energy", "Mz", "C12", "C13", "I12", "I13", "D12", "D13", "Eglobal", "degenerate", "rdm13"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let ed = &v["ed"];
    let diff = (v["energy"].as_f64().unwrap() - ed["energy"].as_f64().unwrap()).abs();
    assert!(diff < 1e-10);
    assert!((v["C13"].as_f64().unwrap() - ed["C13"].as_f64().unwrap()).abs() < 1e-10);
}

#[test]
fn report_accepts_negative_values_and_odd_sector() {
    let o = run(&["report", "--jx", "-1", "--jy", "-2", "--h", "-0.3", "--n", "8", "--sector", "odd"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sector"], "odd");
    assert_eq!(v["degenerate"], true);
}

#[test]
fn report_rejects_invalid_parameters() {
    let o = run(&["report", "--jx", "1", "--jy", "0", "--h", "0", "--n", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = run(&["report", "--jx", "1", "--jy", "0", "--h", "0", "--n", "100", "--ed"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_with_header_and_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    fs::write(&cfg, SWEEP).unwrap();
    let out = dir.path().join("out.csv");
    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# {"));
    assert_eq!(lines.next().unwrap(), "jy,h,Mz,C13,D13,dC13/dh,err_dC13/dh,degenerate");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 14);
    for field in rows[3].split(',').take(7) {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{field}");
    }
    let table = sweep::read_csv(text.as_bytes()).unwrap();
    assert_eq!(table.rows.len(), 14);
}

#[test]
fn sweep_to_stdout_as_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    fs::write(&cfg, SWEEP).unwrap();
    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--format", "jsonl"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(first.get("spec").is_some());
    let row: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(row["jy"], -1.0);
    assert!(row["degenerate"].is_boolean());
    assert_eq!(sweep::read_jsonl(text.as_bytes()).unwrap().rows.len(), 14);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    fs::write(&cfg, SWEEP.replace("\"fixed\"", "\"colour\": 1, \"fixed\"")).unwrap();
    let o = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    fs::write(&cfg, SWEEP.replace("\"jx\": 1.0", "\"jx\": 1.0, \"jz\": 2.0")).unwrap();
    assert_eq!(run(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn scan_lists_degenerate_points() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.json");
    fs::write(
        &cfg,
        r#"{"axis1": {"parameter": "jy", "start": -1.0, "stop": 1.0, "count": 5},
            "axis2": {"parameter": "h", "start": -2.0, "stop": 2.0, "count": 9},
            "fixed": {"jx": 1.0, "n": 20}}"#,
    )
    .unwrap();
    let o = run(&["scan-degeneracy", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1).unwrap(), "jy,h,min_omega,zero_modes,kind,ground_multiplicity");
    // (Jy, h) = (0, 1) sits on h = Jx + Jy.
    assert!(text.lines().any(|l| l.starts_with("0.0000000000000000e0,1.0000000000000000e0,")));
}

#[test]
fn validate_reports_small_deviations() {
    let o = run(&["validate", "--points", "4", "--lengths", "8,10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("compared 8 points"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("D13")));
}

#[test]
fn shipped_config_runs_through_the_binary() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig1_magnetisation.json");
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/fig1_magnetisation.csv");
    let o = run(&["sweep", "--config", cfg, "--output", "-"]);
    assert!(o.status.success());
    assert_eq!(o.stdout, fs::read(golden).unwrap());
}
