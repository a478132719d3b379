//! Dataset construction from solver runs and leave-one-instance-out
//! scoring, shared by the evaluation commands and the tuning objective.

use crate::bench::{EvalBudget, make_instance};
use crate::error::{Error, Result};
use crate::models::{
    self, ForestModel, Metrics, accuracy, rmse, train_rf_classifier, train_rf_regressor,
    train_rotation_forest, train_tsf_regressor,
};
use crate::seed;
use crate::solvers::{SAConfig, SolverId, SolverParams, run_gsa, run_portfolio_solver};
use crate::trajectory::{
    Fold, LabeledDataset, Modality, Task, Trajectory, TrajectoryKind, TrajectorySource,
    concat_all, loio_folds,
};

/// Probe the whole suite: `runs` seeded annealing trajectories per instance.
pub fn probe_trajectories(
    functions: &[u32],
    instances: &[u32],
    dim: usize,
    runs: u32,
    config: &SAConfig,
    kind: TrajectoryKind,
    stream_seed: u64,
) -> Result<Vec<Trajectory>> {
    let mut out = Vec::with_capacity(functions.len() * instances.len() * runs as usize);
    for &f in functions {
        for &i in instances {
            let instance = make_instance(f, i, dim)?;
            for run in 0..runs {
                let run_seed =
                    seed::derive(stream_seed, "probe.run", &[f as u64, i as u64, run as u64]);
                let mut budget = EvalBudget::new(config.n_samples as u64)?;
                let result = run_gsa(&instance, config, run_seed, &mut budget)?;
                out.push(Trajectory::from_run(
                    &result,
                    kind,
                    TrajectorySource::Solver(SolverId::Sa),
                    f,
                    i,
                    run_seed,
                ));
            }
        }
    }
    Ok(out)
}

/// Portfolio trajectories over the suite; `source` selects one solver or
/// the fixed-order concatenation of all three.
pub fn portfolio_trajectories(
    functions: &[u32],
    instances: &[u32],
    dim: usize,
    runs: u32,
    source: TrajectorySource,
    kind: TrajectoryKind,
    generations: usize,
    stream_seed: u64,
) -> Result<Vec<Trajectory>> {
    let mut out = Vec::with_capacity(functions.len() * instances.len() * runs as usize);
    for &f in functions {
        for &i in instances {
            let instance = make_instance(f, i, dim)?;
            for run in 0..runs {
                let unit_seed =
                    seed::derive(stream_seed, "portfolio.run", &[f as u64, i as u64, run as u64]);
                let solo = |solver: SolverId| -> Result<Trajectory> {
                    let params = SolverParams::defaults(solver);
                    let run_seed = seed::derive(unit_seed, solver.name(), &[]);
                    let mut budget =
                        EvalBudget::new(params.population as u64 * generations as u64)?;
                    let result = run_portfolio_solver(
                        solver,
                        &instance,
                        &params,
                        generations,
                        run_seed,
                        &mut budget,
                    )?;
                    Ok(Trajectory::from_run(
                        &result,
                        kind,
                        TrajectorySource::Solver(solver),
                        f,
                        i,
                        unit_seed,
                    ))
                };
                match source {
                    TrajectorySource::All => {
                        let parts: Vec<Trajectory> = SolverId::PORTFOLIO
                            .iter()
                            .map(|&s| solo(s))
                            .collect::<Result<_>>()?;
                        out.push(concat_all(&parts)?);
                    }
                    TrajectorySource::Solver(SolverId::Sa) => {
                        return Err(Error::domain(
                            "probe trajectories come from the probe command, not the portfolio",
                        ));
                    }
                    TrajectorySource::Solver(s) => out.push(solo(s)?),
                }
            }
        }
    }
    Ok(out)
}

/// Train the model the task/modality combination calls for: random forests
/// on feature vectors, rotation forest / time-series forest on raw series.
pub fn train_for(
    dataset: &LabeledDataset,
    rows: &[usize],
    n_trees: usize,
    model_seed: u64,
) -> Result<ForestModel> {
    let x = dataset.matrix(rows);
    match (dataset.task, dataset.modality) {
        (Task::Classification, Modality::Raw) => {
            train_rotation_forest(&x, &dataset.class_indices(rows)?, n_trees, model_seed)
        }
        (Task::Regression(_), Modality::Raw) => {
            train_tsf_regressor(&x, &dataset.targets(rows)?, n_trees, model_seed)
        }
        (Task::Classification, _) => {
            train_rf_classifier(&x, &dataset.class_indices(rows)?, n_trees, model_seed)
        }
        (Task::Regression(_), _) => {
            train_rf_regressor(&x, &dataset.targets(rows)?, n_trees, model_seed)
        }
    }
}

/// Task metric (accuracy or RMSE) of one fold's validation rows under a
/// model trained on its training rows.
pub fn score_fold(
    dataset: &LabeledDataset,
    fold: &Fold,
    n_trees: usize,
    model_seed: u64,
) -> Result<f64> {
    let model = train_for(dataset, &fold.train, n_trees, model_seed)?;
    let x_val = dataset.matrix(&fold.validation);
    match dataset.task {
        Task::Classification => {
            let truth = dataset.class_indices(&fold.validation)?;
            let predictions: Vec<usize> =
                x_val.iter().map(|r| model.predict_class(r)).collect::<Result<_>>()?;
            accuracy(&predictions, &truth)
        }
        Task::Regression(_) => {
            let truth = dataset.targets(&fold.validation)?;
            let predictions: Vec<f64> =
                x_val.iter().map(|r| model.predict_value(r)).collect::<Result<_>>()?;
            rmse(&predictions, &truth)
        }
    }
}

/// Per-fold results of a full leave-one-instance-out pass.
#[derive(Debug, Clone)]
pub struct FoldScore {
    pub instance_id: u32,
    pub n_train: usize,
    pub n_val: usize,
    pub value: f64,
}

/// Cross-validate the dataset: one model per fold, task metric per fold.
pub fn loio_metrics(
    dataset: &LabeledDataset,
    n_trees: usize,
    eval_seed: u64,
) -> Result<(Vec<FoldScore>, Metrics)> {
    let folds = loio_folds(dataset)?;
    let scores: Vec<FoldScore> = folds
        .iter()
        .enumerate()
        .map(|(k, fold)| {
            let model_seed = seed::derive(eval_seed, "fold.model", &[k as u64]);
            Ok(FoldScore {
                instance_id: fold.instance_id,
                n_train: fold.train.len(),
                n_val: fold.validation.len(),
                value: score_fold(dataset, fold, n_trees, model_seed)?,
            })
        })
        .collect::<Result<_>>()?;
    let metrics = Metrics::from_folds(scores.iter().map(|s| s.value).collect())?;
    Ok((scores, metrics))
}

/// Convenience: `models::DEFAULT_TREES` unless a caller overrides.
pub fn default_trees() -> usize {
    models::DEFAULT_TREES
}
