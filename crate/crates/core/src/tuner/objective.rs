//! The tuning cost: probe the suite with a candidate configuration, train
//! the task's model, and score the unit's held-out fold.

use crate::error::{Error, Result};
use crate::pipeline::eval;
use crate::seed;
use crate::solvers::{PortfolioLabel, gsa::SAConfig};
use crate::trajectory::{Modality, Task, assemble_dataset, loio_folds};
use crate::tuner::{CostObjective, EvalUnit, TuneTask};

/// Cost of one `(configuration, unit)` experiment: `1 - accuracy` for
/// classification, RMSE for regression, measured on the unit's fold.
pub fn objective_cost(
    config: &SAConfig,
    task: &TuneTask,
    labels: &[PortfolioLabel],
    unit: &EvalUnit,
) -> Result<f64> {
    config.validate()?;
    if task.instances.is_empty() || task.functions.is_empty() {
        return Err(Error::domain("tuning task has an empty suite"));
    }
    let fold_instance = task.instances[unit.index as usize % task.instances.len()];

    let trajectories = eval::probe_trajectories(
        &task.functions,
        &task.instances,
        task.dim,
        task.runs,
        config,
        task.kind,
        unit.seed,
    )?;
    let dataset = assemble_dataset(
        &trajectories,
        labels,
        task.objective,
        Modality::Raw,
        seed::derive(unit.seed, "objective.assemble", &[]),
    )?;
    let folds = loio_folds(&dataset)?;
    let fold = folds
        .iter()
        .find(|f| f.instance_id == fold_instance)
        .ok_or_else(|| Error::domain(format!("unit fold instance {fold_instance} not in dataset")))?;

    let model_seed = seed::derive(unit.seed, "objective.model", &[]);
    let metric = eval::score_fold(&dataset, fold, eval::default_trees(), model_seed)?;
    Ok(match task.objective {
        Task::Classification => 1.0 - metric,
        Task::Regression(_) => metric,
    })
}

/// [`CostObjective`] over a task and its ground-truth labels.
pub struct TaskObjective<'a> {
    pub task: &'a TuneTask,
    pub labels: &'a [PortfolioLabel],
}

impl CostObjective for TaskObjective<'_> {
    fn cost(&self, config: &SAConfig, unit: &EvalUnit) -> Result<f64> {
        objective_cost(config, self.task, self.labels, unit)
    }
}
