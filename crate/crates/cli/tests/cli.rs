//! End-to-end tests of the `gcn` binary: every shipped example file passes
//! its associated verb with exit 0, reports are byte-stable across runs, and
//! the exit-code contract holds.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gcn"))
}

fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    for a in args {
        if let Some(name) = a.strip_prefix("EX/") {
            cmd.arg(examples_dir().join(name));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

/// Every shipped example file, with the verb it is meant for.
fn shipped() -> Vec<Vec<&'static str>> {
    vec![
        vec!["bracket", "EX/j1_gc1.json", "EX/j1_gc1.json"],
        vec!["check-virasoro", "EX/canonical_gc1.json"],
        vec!["check-virasoro", "EX/canonical_gc2.json"],
        vec!["is-standard", "EX/standard_deg1_gc2.json"],
        vec!["make", "EX/make_standard_higher.json"],
        vec!["make", "EX/make_nonstandard_t1.json"],
        vec!["module-axioms", "EX/mod_std_gc2.json", "--nmax", "3"],
        vec!["dual", "EX/mod_std_gc2.json", "--nmax", "3"],
        vec!["restrict", "EX/canonical_gc2.json", "EX/mod_std_gc2.json"],
        vec!["regularity", "EX/mod_std_gc2.json", "--canonical", "1,1/2"],
        vec!["regularity", "EX/mod_vir_sum.json"],
        vec![
            "weight-product",
            "EX/mod_std_gc2.json",
            "--canonical",
            "0,0",
            "--canonical",
            "1/3,0",
        ],
        vec!["vir-semisimple", "EX/mod_vir_sum.json"],
        vec!["decompose", "EX/mod_sum_gc1.json", "--L1", "0,0", "--L2", "1,0"],
        vec!["decompose", "EX/mod_mult_gc2.json", "--L1", "0,0", "--L2", "1,0"],
        vec!["classify-deg1", "--n", "1", "--coeffs", "-1,0,1", "--deg", "1"],
    ]
}

#[test]
fn every_shipped_example_passes_its_verb() {
    for args in shipped() {
        let out = run(&args);
        assert!(
            out.status.code() == Some(0),
            "{args:?} exited with {:?}\nstdout: {}\nstderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        let report = stdout_json(&out);
        assert!(report.get("operation").is_some());
        assert!(report.get("inputs-digest").is_some());
        assert!(report.get("result").is_some());
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in shipped() {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(
            first.stdout, second.stdout,
            "{args:?} produced differing reports"
        );
    }
}

#[test]
fn bracket_prints_the_virasoro_relation() {
    let out = run(&["bracket", "EX/j1_gc1.json", "EX/j1_gc1.json"]);
    let report = stdout_json(&out);
    assert_eq!(report["result"]["display"], "(∂ + 2λ)J^1");
}

#[test]
fn check_virasoro_reports_fields_and_exit_codes() {
    let out = run(&["check-virasoro", "EX/canonical_gc1.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["is_virasoro"], true);
    assert_eq!(report["result"]["degree"], 1);
    assert_eq!(report["result"]["is_standard"], true);

    // a degree-zero element fails mathematically: exit 1, report still printed
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j0.json");
    std::fs::write(
        &path,
        r#"{"N": 1, "terms": [{"n": 0, "entries": [[1, 1, [[0,0,0,"1"]]]]}]}"#,
    )
    .unwrap();
    let out = bin().arg("check-virasoro").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["is_virasoro"], false);
}

#[test]
fn decompose_recovers_the_recipe() {
    let out = run(&["decompose", "EX/mod_sum_gc1.json", "--L1", "0,0", "--L2", "1,0"]);
    let report = stdout_json(&out);
    let summands = report["result"]["summands"].as_array().unwrap();
    assert_eq!(summands.len(), 2);
    assert_eq!(summands[0]["kind"], "standard");
    assert_eq!(summands[0]["alpha"], "1/2");
    assert_eq!(summands[1]["kind"], "dual");
    assert_eq!(summands[1]["alpha"], "-1/3");

    let out = run(&["decompose", "EX/mod_mult_gc2.json", "--L1", "0,0", "--L2", "1,0"]);
    let report = stdout_json(&out);
    let summands = report["result"]["summands"].as_array().unwrap();
    assert_eq!(summands.len(), 1);
    assert_eq!(summands[0]["mult"], 2);
}

#[test]
fn make_emits_a_certified_element() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("element.json");
    let mut cmd = bin();
    cmd.arg("make")
        .arg(examples_dir().join("make_nonstandard_t1.json"))
        .arg("--out")
        .arg(&out_path);
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["is_virasoro"], true);
    assert_eq!(report["result"]["is_standard"], false);

    // the emitted file round-trips through check-virasoro
    let out = bin().arg("check-virasoro").arg(&out_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = bin().arg("check-virasoro").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("broken.json"), "stderr was: {stderr}");
    assert!(stderr.contains("expected"), "stderr was: {stderr}");

    let out = bin().arg("check-virasoro").arg("/nonexistent/x.json").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dual_output_feeds_back_into_module_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("dual.json");
    let out = bin()
        .arg("dual")
        .arg(examples_dir().join("mod_std_gc2.json"))
        .arg("--nmax")
        .arg("6")
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .arg("module-axioms")
        .arg(&out_path)
        .arg("--nmax")
        .arg("3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["pass"], true);
}

#[test]
fn decompose_obstruction_exits_one_with_error_kind() {
    // J^0 acting as zero forces β = 0, which matches no partition class
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trivialish.json");
    std::fs::write(
        &path,
        r#"{
            "algebra": "gc", "N": 1,
            "recipe": {"kind": "explicit", "rank": 1, "n_max": 8,
                       "tables": [{"n": 1, "i": 1, "j": 1,
                                   "matrix": [[[[1,0,0,"1"],[0,1,0,"1"]]]]}]}
        }"#,
    )
    .unwrap();
    let out = bin()
        .arg("decompose")
        .arg(&path)
        .arg("--L1")
        .arg("0,0")
        .arg("--L2")
        .arg("1,0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["error"]["kind"], "PartitionViolation");
}

#[test]
fn regularity_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scrambled.json");
    std::fs::write(
        &path,
        r#"{
            "algebra": "vir",
            "recipe": {
                "kind": "basis_change",
                "inner": {"kind": "direct_sum", "parts": [
                    {"kind": "vir_module", "delta": "1", "alpha": "0"},
                    {"kind": "vir_module", "delta": "0", "alpha": "0"}
                ]},
                "matrix": [["1", "1"], ["0", "1"]]
            }
        }"#,
    )
    .unwrap();
    let out = bin().arg("vir-semisimple").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["semisimple"], false);
}
