//! End-to-end command tests against the built binary: exit codes, file
//! outputs, and rerun determinism.

use std::path::Path;
use std::process::{Command, Output};

fn probetune(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_probetune"))
        .arg("--config")
        .arg(config)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, out: &Path, seed: u64) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let text = format!(
        r#"{{
  "suite": {{"function_ids": [1, 8], "instance_ids": [1, 2], "dim": 3}},
  "runs": 2,
  "generations": [2],
  "truth_budget": 400,
  "tuning_budget": 60,
  "repeats": 2,
  "master_seed": {seed},
  "out_dir": {out:?},
  "jobs": 0
}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn list_functions_names_the_whole_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &dir.path().join("out"), 1);
    let output = probetune(&config, &["list-functions"]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for name in ["sphere", "rastrigin", "gallagher", "schwefel"] {
        assert!(text.contains(name), "missing {name} in catalog listing");
    }
}

#[test]
fn unknown_task_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &dir.path().join("out"), 1);
    let output = probetune(&config, &["tune", "--task", "nonsense"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn evaluate_before_labels_exits_with_file_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &dir.path().join("out"), 1);
    let output = probetune(
        &config,
        &["evaluate", "--task", "regression-cmaes", "--modality", "raw"],
    );
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn ela_modality_rejects_an_explicit_source() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &dir.path().join("out"), 1);
    let output = probetune(
        &config,
        &[
            "evaluate",
            "--task",
            "regression-cmaes",
            "--modality",
            "ela",
            "--source",
            "cmaes",
        ],
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn truth_budget_below_one_generation_is_a_budget_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config_path = dir.path().join("config.json");
    let text = format!(
        r#"{{
  "suite": {{"function_ids": [1], "instance_ids": [1], "dim": 3}},
  "runs": 1, "generations": [2], "truth_budget": 30, "tuning_budget": 60,
  "repeats": 1, "master_seed": 1, "out_dir": {out:?}, "jobs": 0
}}"#
    );
    std::fs::write(&config_path, text).unwrap();
    let output = probetune(&config_path, &["gen-labels"]);
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn pipeline_runs_and_reruns_byte_identically() {
    let dir = tempfile::tempdir().unwrap();

    let run_all = |out: &Path, seed: u64| {
        let config = write_config(dir.path(), out, seed);
        for args in [
            vec!["gen-labels"],
            vec!["tune", "--task", "regression-cmaes", "--kind", "current"],
            vec![
                "evaluate",
                "--task",
                "regression-cmaes",
                "--modality",
                "raw",
                "--kind",
                "current",
            ],
            vec!["gen-trajectories", "--source", "all", "--generations", "2"],
            vec!["report"],
        ] {
            let output = probetune(&config, &args);
            assert!(
                output.status.success(),
                "command {args:?} failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
        }
    };

    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_all(&out_a, 9);
    run_all(&out_b, 9);

    let manifest_a = std::fs::read_to_string(out_a.join("manifest.json")).unwrap();
    let manifest_b = std::fs::read_to_string(out_b.join("manifest.json")).unwrap();
    assert_eq!(manifest_a, manifest_b, "reruns with one seed must be byte-identical");

    let out_c = dir.path().join("c");
    run_all(&out_c, 10);
    let manifest_c = std::fs::read_to_string(out_c.join("manifest.json")).unwrap();
    assert_ne!(manifest_a, manifest_c, "different seeds must change outputs");

    // The labels file really is on disk and sums to the suite size.
    let labels: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_a.join("labels.json")).unwrap()).unwrap();
    assert_eq!(labels["labels"].as_array().unwrap().len(), 4);
}
