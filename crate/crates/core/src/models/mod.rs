//! Tree-ensemble learners and their metrics.
//!
//! Feature-vector inputs go to random forests; raw trajectory inputs go to
//! the specialised time-series ensembles (rotation forest for
//! classification, time-series forest for regression). All models are
//! deterministic per seed and serialize to a versioned JSON document.

pub mod tree;

mod forest;
mod rotation;
mod tsf;

pub use forest::{train_rf_classifier, train_rf_regressor};
pub use rotation::{RotationBlock, train_rotation_forest};
pub use tsf::{Interval, train_tsf_regressor};

pub(crate) use forest::train_bagged;

use crate::error::{Error, Result};
use tree::{LeafValue, Tree};

/// Serialized model format version.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Default ensemble size; no depth limit, leaf minimum 1 for classification
/// and 5 for regression.
pub const DEFAULT_TREES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RfClassifier,
    RfRegressor,
    RotationForest,
    TimeSeriesForest,
}

/// A trained ensemble, with the per-tree transforms its kind requires.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ForestModel {
    pub kind: ModelKind,
    pub seed: u64,
    /// Number of classes for classifiers; 0 for regressors.
    pub n_classes: usize,
    pub(crate) trees: Vec<Tree>,
    pub(crate) rotations: Option<Vec<Vec<RotationBlock>>>,
    pub(crate) intervals: Option<Vec<Vec<Interval>>>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct VersionedModel {
    version: u32,
    model: ForestModel,
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Predict a class index; ties break toward the smallest class index.
    pub fn predict_class(&self, row: &[f64]) -> Result<usize> {
        match self.kind {
            ModelKind::RfClassifier => {
                let mut votes = vec![0u32; self.n_classes];
                for tree in &self.trees {
                    match tree.leaf_of(row) {
                        LeafValue::Classes(dist) => votes[argmax(dist)] += 1,
                        LeafValue::Value(_) => {
                            return Err(Error::domain("regression leaf in a classifier"));
                        }
                    }
                }
                let as_f: Vec<f64> = votes.iter().map(|&v| v as f64).collect();
                Ok(argmax(&as_f))
            }
            ModelKind::RotationForest => {
                let rotations =
                    self.rotations.as_ref().expect("rotation forest carries rotations");
                let mut sums = vec![0.0; self.n_classes];
                for (tree, blocks) in self.trees.iter().zip(rotations) {
                    let rotated = rotation::rotate_row(row, blocks);
                    match tree.leaf_of(&rotated) {
                        LeafValue::Classes(dist) => {
                            for (s, d) in sums.iter_mut().zip(dist) {
                                *s += d;
                            }
                        }
                        LeafValue::Value(_) => {
                            return Err(Error::domain("regression leaf in a classifier"));
                        }
                    }
                }
                Ok(argmax(&sums))
            }
            _ => Err(Error::domain("model kind does not predict classes")),
        }
    }

    /// Predict a regression value as the mean over trees.
    pub fn predict_value(&self, row: &[f64]) -> Result<f64> {
        match self.kind {
            ModelKind::RfRegressor => {
                let mut sum = 0.0;
                for tree in &self.trees {
                    match tree.leaf_of(row) {
                        LeafValue::Value(v) => sum += v,
                        LeafValue::Classes(_) => {
                            return Err(Error::domain("classification leaf in a regressor"));
                        }
                    }
                }
                Ok(sum / self.trees.len() as f64)
            }
            ModelKind::TimeSeriesForest => {
                let intervals =
                    self.intervals.as_ref().expect("time-series forest carries intervals");
                let mut sum = 0.0;
                for (tree, ivs) in self.trees.iter().zip(intervals) {
                    let derived = tsf::interval_features(row, ivs);
                    match tree.leaf_of(&derived) {
                        LeafValue::Value(v) => sum += v,
                        LeafValue::Classes(_) => {
                            return Err(Error::domain("classification leaf in a regressor"));
                        }
                    }
                }
                Ok(sum / self.trees.len() as f64)
            }
            _ => Err(Error::domain("model kind does not predict values")),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&VersionedModel {
            version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let versioned: VersionedModel = serde_json::from_str(text)?;
        if versioned.version != MODEL_FORMAT_VERSION {
            return Err(Error::domain(format!(
                "unsupported model format version {}",
                versioned.version
            )));
        }
        Ok(versioned.model)
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn validate_matrix(x: &[Vec<f64>], n_targets: usize, n_trees: usize) -> Result<()> {
    if n_trees < 1 {
        return Err(Error::domain("ensemble needs at least 1 tree"));
    }
    if x.is_empty() {
        return Err(Error::domain("training set is empty"));
    }
    if x.len() != n_targets {
        return Err(Error::domain(format!(
            "row/target mismatch: {} rows, {} targets",
            x.len(),
            n_targets
        )));
    }
    let width = x[0].len();
    if width == 0 {
        return Err(Error::domain("training rows have zero width"));
    }
    if x.iter().any(|r| r.len() != width) {
        return Err(Error::domain("training rows must share one length"));
    }
    Ok(())
}

/// Per-fold metric values with their median (the reported aggregate) and
/// mean.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Metrics {
    pub per_fold: Vec<f64>,
    pub median: f64,
    pub mean: f64,
}

impl Metrics {
    pub fn from_folds(per_fold: Vec<f64>) -> Result<Self> {
        if per_fold.is_empty() {
            return Err(Error::domain("metrics need at least one fold"));
        }
        let mut sorted = per_fold.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite metrics"));
        let n = sorted.len();
        let median =
            if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };
        let mean = per_fold.iter().sum::<f64>() / n as f64;
        Ok(Metrics { per_fold, median, mean })
    }
}

/// Fraction of matching predictions.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != truth.len() {
        return Err(Error::domain("accuracy needs equal-length non-empty inputs"));
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / predicted.len() as f64)
}

/// Root mean squared error.
pub fn rmse(predicted: &[f64], truth: &[f64]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != truth.len() {
        return Err(Error::domain("rmse needs equal-length non-empty inputs"));
    }
    let sum_sq: f64 = predicted.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok((sum_sq / predicted.len() as f64).sqrt())
}
