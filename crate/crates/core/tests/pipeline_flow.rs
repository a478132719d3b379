//! Pipeline command integration at toy scale: CSV shapes, transfer
//! degeneracy, and file-level error paths.

use probetune::error::Error;
use probetune::pipeline::{
    self, EvalSource, ExperimentConfig, SuiteConfig, cmd_evaluate, cmd_gen_labels,
    cmd_gen_trajectories, cmd_report, cmd_transfer, cmd_tune,
};
use probetune::solvers::{SAConfig, SolverId};
use probetune::trajectory::{Modality, Task, TrajectoryKind, TrajectorySource};

fn toy_config(dir: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        suite: SuiteConfig { function_ids: vec![1, 8], instance_ids: vec![1, 2, 3], dim: 3 },
        runs: 2,
        generations: vec![2],
        truth_budget: 400,
        tuning_budget: 60,
        repeats: 2,
        master_seed: 5,
        out_dir: dir.to_path_buf(),
        jobs: 0,
    }
}

#[test]
fn evaluate_writes_one_row_per_fold_plus_aggregate() {
    let dir = tempfile::tempdir().unwrap();
    let config = toy_config(dir.path());
    cmd_gen_labels(&config).unwrap();
    let summary = cmd_evaluate(
        &config,
        Task::Regression(SolverId::Cmaes),
        Modality::Raw,
        &EvalSource::Probe(SAConfig { n_samples: 12, ..SAConfig::default() }),
        TrajectoryKind::Current,
        0,
    )
    .unwrap();

    assert_eq!(summary.repeats.len(), 2);
    for repeat in &summary.repeats {
        // One fold per instance.
        assert_eq!(repeat.fold_scores.len(), 3);
        for fold in &repeat.fold_scores {
            assert_eq!(fold.n_train, 2 * 2 * 2);
            assert_eq!(fold.n_val, 2 * 2);
        }
    }

    let csv = std::fs::read_to_string(dir.path().join(&summary.csv_path)).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    // Header + repeats * (folds + one aggregate row).
    assert_eq!(lines.len(), 1 + 2 * (3 + 1));
    assert_eq!(lines[0], "repeat,fold,n_train,n_val,metric,value,value_mean");
    let aggregates = lines.iter().filter(|l| l.contains(",aggregate,")).count();
    assert_eq!(aggregates, 2);
}

#[test]
fn transfer_to_the_same_task_matches_direct_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let config = toy_config(dir.path());
    cmd_gen_labels(&config).unwrap();
    cmd_tune(&config, Task::Regression(SolverId::Cmaes), TrajectoryKind::Current).unwrap();
    let tuned =
        pipeline::load_best_elite(&config, Task::Regression(SolverId::Cmaes), TrajectoryKind::Current)
            .unwrap();

    let direct = cmd_evaluate(
        &config,
        Task::Regression(SolverId::Cmaes),
        Modality::Raw,
        &EvalSource::Probe(tuned),
        TrajectoryKind::Current,
        0,
    )
    .unwrap();
    let transferred = cmd_transfer(
        &config,
        Task::Regression(SolverId::Cmaes),
        TrajectoryKind::Current,
        Task::Regression(SolverId::Cmaes),
        TrajectoryKind::Current,
    )
    .unwrap();

    for (d, t) in direct.repeats.iter().zip(&transferred.repeats) {
        assert_eq!(d.metrics.per_fold, t.metrics.per_fold);
    }
    // The transfer file carries the provenance column.
    let csv = std::fs::read_to_string(dir.path().join(&transferred.csv_path)).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",provenance"));
    assert!(csv.contains("regression-cmaes-current"));
}

#[test]
fn transfer_without_tuned_configurations_is_a_file_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = toy_config(dir.path());
    cmd_gen_labels(&config).unwrap();
    let err = cmd_transfer(
        &config,
        Task::Regression(SolverId::Pso),
        TrajectoryKind::Current,
        Task::Regression(SolverId::Cmaes),
        TrajectoryKind::Current,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Io(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn portfolio_trajectory_files_have_table_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let config = toy_config(dir.path());
    let set = cmd_gen_trajectories(
        &config,
        &EvalSource::Portfolio {
            source: TrajectorySource::Solver(SolverId::Cmaes),
            generations: 2,
        },
        TrajectoryKind::Current,
    )
    .unwrap();
    assert_eq!(set.series_length, 20);
    let one = std::fs::read_to_string(
        dir.path().join(&set.directory).join("f1_i1_r0.csv"),
    )
    .unwrap();
    assert_eq!(one.lines().count(), 21, "header plus 20 evaluations");
}

#[test]
fn report_summarizes_each_metrics_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = toy_config(dir.path());
    cmd_gen_labels(&config).unwrap();
    for n in [10u32, 20] {
        cmd_evaluate(
            &config,
            Task::Regression(SolverId::De),
            Modality::Raw,
            &EvalSource::Probe(SAConfig { n_samples: n, ..SAConfig::default() }),
            TrajectoryKind::Best,
            0,
        )
        .unwrap();
    }
    let (rows, table) = cmd_report(&config).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(table.lines().count() >= 3);
    assert!(dir.path().join("report.csv").exists());
    assert!(dir.path().join("report.txt").exists());
}
