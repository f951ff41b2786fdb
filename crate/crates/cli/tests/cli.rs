//! End-to-end tests of the binary: subcommand output, exit codes and
//! determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn workload(name: &str) -> String {
    fixtures()
        .join("workloads")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn qenergy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qenergy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qenergy-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

#[test]
fn estimate_obc_table_reproduces_published_row() {
    let output = qenergy(&["estimate", &workload("heisenberg_obc.json")]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("432,720"));
    assert!(text.contains("887,400"));
    assert!(text.contains("1,342,080"));
    assert!(text.contains("2,662,200"));
    assert!(text.contains("2.686 MW"));
}

#[test]
fn estimate_pbc_machine_report() {
    let output = qenergy(&[
        "estimate",
        &workload("heisenberg_pbc.json"),
        "--format",
        "machine",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let exec = report["exec"]["nisq"]["total_exec_joules"].as_f64().unwrap();
    assert_eq!(exec, 2_693_520_000.0);
    let power = report["power_watts"].as_f64().unwrap();
    assert!((power - 2.684e6).abs() / 2.684e6 < 1e-3);
}

#[test]
fn machine_output_is_byte_identical_across_runs() {
    let args = [
        "estimate",
        &workload("ftqc_solved.json"),
        "--format",
        "machine",
    ];
    let first = qenergy(&args);
    let second = qenergy(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn parse_error_exits_one_with_diagnostic() {
    let path = write_temp("broken.json", "{ \"name\": ");
    let output = qenergy(&["estimate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("syntax error"));
    assert!(stdout(&output).is_empty(), "no partial report on failure");
}

#[test]
fn regime_mismatch_exits_one() {
    let path = write_temp(
        "mismatch.json",
        r#"{
            "name": "bad",
            "regime": "ftqc",
            "technology": "superconducting",
            "nisq": {
                "gate_counts": {"counts": {"cx": 1}, "qubit_count": 1},
                "qem": {"zne_folds": [1], "pt_copies": 1, "shots": 1, "fold_mode": "global"}
            }
        }"#,
    );
    let output = qenergy(&["estimate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("regime/payload mismatch"));
}

#[test]
fn infeasible_model_exits_two() {
    let output = qenergy(&["estimate", &workload("ftqc_above_threshold.json")]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("above threshold"));
    assert!(stdout(&output).is_empty());
}

#[test]
fn missing_file_exits_three() {
    let output = qenergy(&["estimate", "no/such/file.json"]);
    assert_eq!(output.status.code(), Some(3));
    assert!(!stderr(&output).is_empty());
}

#[test]
fn sweep_t_count_crosses_from_lattice_to_magic() {
    let output = qenergy(&[
        "sweep",
        &workload("ftqc_solved.json"),
        "--param",
        "ftqc.logical.t_count",
        "--values",
        "0,1000,1000000",
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header plus one row per value:\n{text}");
    assert!(lines[1].ends_with("lattice"));
    assert!(lines[3].ends_with("magic"));
}

#[test]
fn sweep_machine_format_is_a_report_sequence() {
    let output = qenergy(&[
        "sweep",
        &workload("nisq_global.json"),
        "--param",
        "nisq.qem.shots",
        "--values",
        "1000,10000",
        "--format",
        "machine",
    ]);
    assert!(output.status.success());
    let docs: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let docs = docs.as_array().unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["value"].as_f64(), Some(1000.0));
    let exec_1k = docs[0]["report"]["exec"]["nisq"]["total_exec_joules"]
        .as_f64()
        .unwrap();
    let exec_10k = docs[1]["report"]["exec"]["nisq"]["total_exec_joules"]
        .as_f64()
        .unwrap();
    assert_eq!(exec_10k, 10.0 * exec_1k);
}

#[test]
fn sweep_empty_values_is_empty_success() {
    let output = qenergy(&[
        "sweep",
        &workload("nisq_global.json"),
        "--param",
        "nisq.qem.shots",
        "--values",
        "",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).is_empty());
}

#[test]
fn sweep_unknown_path_exits_one() {
    let output = qenergy(&[
        "sweep",
        &workload("nisq_global.json"),
        "--param",
        "nisq.qem.nope",
        "--values",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("unknown parameter path"));
}

#[test]
fn maintenance_policy_flag_controls_total() {
    let excluded = qenergy(&[
        "estimate",
        &workload("heisenberg_obc.json"),
        "--maintenance",
        "exclude",
        "--format",
        "machine",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&excluded)).unwrap();
    assert_eq!(report["e_sys_joules"].as_f64(), Some(0.0));
    assert_eq!(report["e_tot_joules"].as_f64(), Some(2_662_200_000.0));

    let included = qenergy(&[
        "estimate",
        &workload("heisenberg_obc.json"),
        "--maintenance",
        "include",
        "--format",
        "machine",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&included)).unwrap();
    assert_eq!(report["e_sys_joules"].as_f64(), Some(24_775_000.0));
    assert!(report["advisories"].as_array().unwrap().is_empty());
}

#[test]
fn profiles_list_and_show() {
    let output = qenergy(&["profiles", "list"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("superconducting"));
    assert!(text.contains("trapped_ion"));

    let output = qenergy(&["profiles", "show", "superconducting"]);
    assert!(output.status.success());
    let profile: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(profile["gate_energy"]["2q"].as_f64(), Some(0.18));

    let output = qenergy(&["profiles", "show", "nope"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn custom_profile_file_is_usable() {
    let profile_file = fixtures().join("profiles/demo_ion.json");
    let doc = write_temp(
        "demo_ion_workload.json",
        r#"{
            "name": "demo-ion",
            "regime": "nisq",
            "technology": "demo_ion",
            "qpu_seconds": 10.0,
            "nisq": {
                "gate_counts": {"counts": {"ms": 10}, "qubit_count": 2},
                "qem": {"zne_folds": [1], "pt_copies": 1, "shots": 100, "fold_mode": "global"}
            }
        }"#,
    );
    let output = qenergy(&[
        "estimate",
        doc.to_str().unwrap(),
        "--profile-file",
        profile_file.to_str().unwrap(),
        "--format",
        "machine",
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    // 10 MS gates x 15 J x 100 shots
    assert_eq!(
        report["exec"]["nisq"]["total_exec_joules"].as_f64(),
        Some(15_000.0)
    );
}

#[test]
fn decoders_show_and_custom_table() {
    let output = qenergy(&["decoders", "show"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("BPOSD"));
    assert!(text.contains("30.33"));

    let table_file = fixtures().join("decoders/custom_table.csv");
    let output = qenergy(&[
        "decoders",
        "show",
        "--decoder-table",
        table_file.to_str().unwrap(),
        "--format",
        "machine",
    ]);
    assert!(output.status.success());
    let table: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(table["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn circuit_file_workload_estimates() {
    let output = qenergy(&[
        "estimate",
        &workload("nisq_circuit_file.json"),
        "--format",
        "machine",
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    // Bell fixture: 4 gates, folds {1, 3}, 2 twirl copies, 4000 shots, 0.18 J.
    assert_eq!(
        report["exec"]["nisq"]["per_fold_gate_counts"]["1"].as_u64(),
        Some(8)
    );
    let echoed = &report["inputs"]["workload"]["nisq"];
    assert!(echoed["circuit_file"].is_null(), "echo shows resolved counts");
    assert_eq!(echoed["gate_counts"]["qubit_count"].as_u64(), Some(2));
}

#[test]
fn counter_file_feeds_classical_energy() {
    let counter = write_temp(
        "counters.csv",
        "node0, 0.0, 100\nnode0, 10.0, 100\ngpu0, 0.0, 50\ngpu0, 10.0, 50\n",
    );
    let doc = write_temp(
        "counter_workload.json",
        &format!(
            r#"{{
                "name": "counter-fed",
                "regime": "nisq",
                "technology": "superconducting",
                "qpu_seconds": 10.0,
                "nisq": {{
                    "gate_counts": {{"counts": {{"cx": 1}}, "qubit_count": 2}},
                    "qem": {{"zne_folds": [1], "pt_copies": 1, "shots": 1, "fold_mode": "global"}}
                }},
                "classical": {{
                    "counter_file": "{}",
                    "pue": [[0.0, 2.0]],
                    "shared_joules": 25.0
                }}
            }}"#,
            counter.file_name().unwrap().to_str().unwrap()
        ),
    );
    let output = qenergy(&["estimate", doc.to_str().unwrap(), "--format", "machine"]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    // (1000 J + 500 J of IT energy) x PUE 2.0 + 25 J shared.
    assert_eq!(report["e_cls_joules"].as_f64(), Some(3025.0));
}

#[test]
fn unknown_gate_policy_flag() {
    let circuit = write_temp("exotic.qasm", "qreg q[1];\nmygate q[0];\n");
    let doc = write_temp(
        "exotic_workload.json",
        &format!(
            r#"{{
                "name": "exotic",
                "regime": "nisq",
                "technology": "superconducting",
                "nisq": {{
                    "circuit_file": "{}",
                    "qem": {{"zne_folds": [1], "pt_copies": 1, "shots": 10, "fold_mode": "global"}}
                }}
            }}"#,
            circuit.file_name().unwrap().to_str().unwrap()
        ),
    );
    let strict = qenergy(&["estimate", doc.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stderr(&strict).contains("unknown gate"));

    let permissive = qenergy(&[
        "estimate",
        doc.to_str().unwrap(),
        "--unknown-gate",
        "other",
        "--format",
        "machine",
    ]);
    assert!(permissive.status.success(), "stderr: {}", stderr(&permissive));
    let report: serde_json::Value = serde_json::from_str(&stdout(&permissive)).unwrap();
    assert_eq!(
        report["inputs"]["workload"]["nisq"]["gate_counts"]["counts"]["other"].as_u64(),
        Some(1)
    );
}
