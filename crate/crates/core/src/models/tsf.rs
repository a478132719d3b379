//! Time-series forest regressor: each tree summarizes random intervals of
//! the series by (mean, std, slope) and grows a regression tree on those
//! derived features.
//!
//! Reference: Deng, Runger, Tuv & Vladimir, A Time Series Forest for
//! Classification and Feature Extraction, Information Sciences 239, 2013.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::tree::{GrowSettings, TreeTarget, grow};
use crate::models::{ForestModel, ModelKind, validate_matrix};
use crate::seed;

const MIN_INTERVAL: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub start: usize,
    pub len: usize,
}

fn draw_intervals(series_len: usize, rng: &mut impl Rng) -> Vec<Interval> {
    let count = (series_len as f64).sqrt().ceil() as usize;
    (0..count)
        .map(|_| {
            let start = rng.random_range(0..=series_len - MIN_INTERVAL);
            let len = rng.random_range(MIN_INTERVAL..=series_len - start);
            Interval { start, len }
        })
        .collect()
}

/// (mean, std, slope) per interval, concatenated.
pub(crate) fn interval_features(series: &[f64], intervals: &[Interval]) -> Vec<f64> {
    let mut out = Vec::with_capacity(intervals.len() * 3);
    for iv in intervals {
        let window = &series[iv.start..iv.start + iv.len];
        let n = window.len() as f64;
        let mean = window.iter().sum::<f64>() / n;
        let var = window.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        // Least-squares slope over positions 0..len.
        let t_mean = (n - 1.0) / 2.0;
        let mut cov = 0.0;
        let mut t_var = 0.0;
        for (t, v) in window.iter().enumerate() {
            let dt = t as f64 - t_mean;
            cov += dt * (v - mean);
            t_var += dt * dt;
        }
        let slope = if t_var > 0.0 { cov / t_var } else { 0.0 };
        out.push(mean);
        out.push(var.sqrt());
        out.push(slope);
    }
    out
}

/// Train a time-series forest regressor on equal-length series.
pub fn train_tsf_regressor(
    x: &[Vec<f64>],
    y: &[f64],
    n_trees: usize,
    model_seed: u64,
) -> Result<ForestModel> {
    validate_matrix(x, y.len(), n_trees)?;
    let series_len = x[0].len();
    if series_len < MIN_INTERVAL {
        return Err(Error::domain(format!("series length must be >= {MIN_INTERVAL}")));
    }

    let built: Vec<_> = (0..n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(model_seed, "tsf.tree", &[t as u64]);
            let intervals = draw_intervals(series_len, &mut rng);
            let derived: Vec<Vec<f64>> =
                x.iter().map(|s| interval_features(s, &intervals)).collect();
            let rows: Vec<usize> = (0..x.len()).collect();
            let settings = GrowSettings { mtry: 0, min_leaf: 5 };
            let grown = grow(&derived, &rows, &TreeTarget::Values(y), &settings, &mut rng);
            (grown.tree, intervals)
        })
        .collect();

    let (trees, intervals): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    Ok(ForestModel {
        kind: ModelKind::TimeSeriesForest,
        seed: model_seed,
        n_classes: 0,
        trees,
        rotations: None,
        intervals: Some(intervals),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_constant_target_is_exact() {
        let x: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64 * 0.0 + 2.0; 12]).collect();
        let y = vec![7.0; 30];
        let model = train_tsf_regressor(&x, &y, 20, 1).unwrap();
        for row in &x {
            assert_eq!(model.predict_value(row).unwrap(), 7.0);
        }
    }

    #[test]
    fn short_series_is_a_domain_error() {
        let x = vec![vec![1.0, 2.0], vec![2.0, 3.0]];
        assert!(train_tsf_regressor(&x, &[1.0, 2.0], 10, 1).is_err());
    }

    #[test]
    fn interval_features_on_a_line() {
        let series: Vec<f64> = (0..10).map(|i| 2.0 * i as f64 + 1.0).collect();
        let feats = interval_features(&series, &[Interval { start: 0, len: 10 }]);
        assert!((feats[0] - 10.0).abs() < 1e-12, "mean of the line");
        assert!((feats[2] - 2.0).abs() < 1e-12, "slope of the line");
    }

    #[test]
    fn deterministic_per_seed() {
        let x: Vec<Vec<f64>> = (0..40)
            .map(|i| (0..15).map(|t| ((i * t) as f64).sin()).collect())
            .collect();
        let y: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let a = train_tsf_regressor(&x, &y, 10, 4).unwrap();
        let b = train_tsf_regressor(&x, &y, 10, 4).unwrap();
        for row in &x {
            assert_eq!(a.predict_value(row).unwrap(), b.predict_value(row).unwrap());
        }
    }
}
