//! Bagged random forests: Gini-split classifier with sqrt(p) candidate
//! features and variance-split regressor with p/3 candidates.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::tree::{GrowSettings, Tree, TreeTarget, grow};
use crate::models::{ForestModel, ModelKind, validate_matrix};
use crate::seed;

pub(crate) struct TrainedForest {
    pub trees: Vec<Tree>,
    pub importance: Vec<f64>,
}

fn bootstrap_rows(n: usize, rng: &mut impl rand::Rng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

pub(crate) fn train_bagged(
    x: &[Vec<f64>],
    target: &TreeTarget<'_>,
    settings: &GrowSettings,
    n_trees: usize,
    model_seed: u64,
) -> TrainedForest {
    let n = x.len();
    let grown: Vec<_> = (0..n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(model_seed, "forest.tree", &[t as u64]);
            let rows = bootstrap_rows(n, &mut rng);
            grow(x, &rows, target, settings, &mut rng)
        })
        .collect();
    let mut importance = vec![0.0; x[0].len()];
    let mut trees = Vec::with_capacity(n_trees);
    for g in grown {
        for (acc, v) in importance.iter_mut().zip(&g.importance) {
            *acc += v / n_trees as f64;
        }
        trees.push(g.tree);
    }
    TrainedForest { trees, importance }
}

pub(crate) fn check_classes(y: &[usize]) -> Result<usize> {
    let mut seen: Vec<usize> = y.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() < 2 {
        return Err(Error::domain("classification needs at least 2 distinct classes"));
    }
    Ok(*seen.last().unwrap() + 1)
}

/// Train a bagged Gini-split classifier. `y` holds class indices.
pub fn train_rf_classifier(
    x: &[Vec<f64>],
    y: &[usize],
    n_trees: usize,
    model_seed: u64,
) -> Result<ForestModel> {
    validate_matrix(x, y.len(), n_trees)?;
    let n_classes = check_classes(y)?;
    let p = x[0].len();
    let settings = GrowSettings { mtry: (p as f64).sqrt().ceil() as usize, min_leaf: 1 };
    let target = TreeTarget::Classes { y, n_classes };
    let trained = train_bagged(x, &target, &settings, n_trees, model_seed);
    Ok(ForestModel {
        kind: ModelKind::RfClassifier,
        seed: model_seed,
        n_classes,
        trees: trained.trees,
        rotations: None,
        intervals: None,
    })
}

/// Train a bagged variance-split regressor.
pub fn train_rf_regressor(
    x: &[Vec<f64>],
    y: &[f64],
    n_trees: usize,
    model_seed: u64,
) -> Result<ForestModel> {
    validate_matrix(x, y.len(), n_trees)?;
    let p = x[0].len();
    let settings = GrowSettings { mtry: (p as f64 / 3.0).ceil() as usize, min_leaf: 5 };
    let target = TreeTarget::Values(y);
    let trained = train_bagged(x, &target, &settings, n_trees, model_seed);
    Ok(ForestModel {
        kind: ModelKind::RfRegressor,
        seed: model_seed,
        n_classes: 0,
        trees: trained.trees,
        rotations: None,
        intervals: None,
    })
}
