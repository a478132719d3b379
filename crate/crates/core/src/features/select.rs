//! Shadow-feature selection.
//!
//! Each iteration appends a permuted copy of every column, trains a
//! random-forest importance model on the augmented matrix, and scores a hit
//! for every real feature whose importance beats the best shadow. Features
//! with significantly many hits under a two-sided binomial test are
//! confirmed; when nothing is confirmed the single most important feature
//! is kept.

use rand::seq::SliceRandom;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::models::tree::{GrowSettings, TreeTarget};
use crate::models::{self, train_bagged};
use crate::seed;

pub const SELECTION_DEFAULT_ITERATIONS: u32 = 50;
pub const SELECTION_DEFAULT_ALPHA: f64 = 0.05;

/// Trees per importance model; small because only the importance ranking
/// matters, not predictive quality.
const IMPORTANCE_TREES: usize = 30;

/// Labels the selection is scored against.
#[derive(Debug, Clone)]
pub enum SelectionTarget {
    Classes(Vec<usize>),
    Targets(Vec<f64>),
}

/// Per-feature keep decisions.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SelectionMask {
    pub keep: Vec<bool>,
    pub iterations: u32,
    pub alpha: f64,
}

impl SelectionMask {
    pub fn kept(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }
}

/// Exact two-sided binomial test against p = 1/2.
fn binomial_two_sided_p(hits: u32, n: u32) -> f64 {
    let pmf = |k: u32| (ln_binomial(n as u64, k as u64) - n as f64 * 2f64.ln()).exp();
    let upper: f64 = (hits..=n).map(pmf).sum();
    let lower: f64 = (0..=hits).map(pmf).sum();
    (2.0 * upper.min(lower)).min(1.0)
}

pub fn select_features(
    x: &[Vec<f64>],
    names: &[String],
    target: &SelectionTarget,
    iterations: u32,
    alpha: f64,
    selection_seed: u64,
) -> Result<SelectionMask> {
    if x.len() < 20 {
        return Err(Error::domain("selection needs at least 20 rows"));
    }
    if iterations < 10 {
        return Err(Error::domain("selection needs at least 10 iterations"));
    }
    let p = names.len();
    if p == 0 || x.iter().any(|r| r.len() != p) {
        return Err(Error::domain("feature matrix does not match the name schema"));
    }
    validate_target(target, x.len())?;

    let mut hits = vec![0u32; p];
    let mut importance_total = vec![0.0f64; p];
    for iteration in 0..iterations {
        let mut rng = seed::rng(selection_seed, "select.iter", &[iteration as u64]);

        // Augment with per-column shuffled shadows.
        let n = x.len();
        let mut augmented: Vec<Vec<f64>> = x.iter().map(|r| {
            let mut row = r.clone();
            row.extend_from_slice(r);
            row
        }).collect();
        for col in 0..p {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for (row, &from) in order.iter().enumerate() {
                augmented[row][p + col] = x[from][col];
            }
        }

        let model_seed = seed::derive(selection_seed, "select.model", &[iteration as u64]);
        let importance = match target {
            SelectionTarget::Classes(y) => {
                let n_classes = y.iter().max().unwrap() + 1;
                let settings = GrowSettings {
                    mtry: ((2 * p) as f64).sqrt().ceil() as usize,
                    min_leaf: 1,
                };
                let t = TreeTarget::Classes { y, n_classes };
                train_bagged(&augmented, &t, &settings, IMPORTANCE_TREES, model_seed).importance
            }
            SelectionTarget::Targets(y) => {
                let settings = GrowSettings {
                    mtry: ((2 * p) as f64 / 3.0).ceil() as usize,
                    min_leaf: 5,
                };
                let t = TreeTarget::Values(y);
                train_bagged(&augmented, &t, &settings, IMPORTANCE_TREES, model_seed).importance
            }
        };

        let shadow_max =
            importance[p..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for f in 0..p {
            importance_total[f] += importance[f];
            if importance[f] > shadow_max {
                hits[f] += 1;
            }
        }
    }

    let mut keep: Vec<bool> = (0..p)
        .map(|f| {
            hits[f] * 2 > iterations && binomial_two_sided_p(hits[f], iterations) < alpha
        })
        .collect();
    if !keep.iter().any(|&k| k) {
        let best = (0..p)
            .max_by(|&a, &b| importance_total[a].partial_cmp(&importance_total[b]).unwrap())
            .expect("at least one feature");
        keep[best] = true;
    }
    Ok(SelectionMask { keep, iterations, alpha })
}

fn validate_target(target: &SelectionTarget, rows: usize) -> Result<()> {
    match target {
        SelectionTarget::Classes(y) => {
            if y.len() != rows {
                return Err(Error::domain("label count does not match row count"));
            }
            let mut distinct = y.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < 2 {
                return Err(Error::domain("selection target is degenerate: single class"));
            }
        }
        SelectionTarget::Targets(y) => {
            if y.len() != rows {
                return Err(Error::domain("target count does not match row count"));
            }
            if y.iter().all(|&v| v == y[0]) {
                return Err(Error::domain("selection target is degenerate: constant target"));
            }
        }
    }
    let _ = models::DEFAULT_TREES;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// One feature tracks the class, nine are pure noise.
    fn informative_vs_noise(rows: usize, dataset_seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rng = seed::rng_from(dataset_seed);
        let mut x = Vec::with_capacity(rows);
        let mut y = Vec::with_capacity(rows);
        for i in 0..rows {
            let class = i % 2;
            let mut row = vec![class as f64 + rng.random_range(-0.05..0.05)];
            for _ in 0..9 {
                row.push(rng.random_range(-1.0..1.0));
            }
            x.push(row);
            y.push(class);
        }
        (x, y)
    }

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|i| format!("f{i}")).collect()
    }

    #[test]
    fn informative_feature_is_kept() {
        let (x, y) = informative_vs_noise(200, 1);
        let mask = select_features(
            &x,
            &names(10),
            &SelectionTarget::Classes(y),
            20,
            0.05,
            7,
        )
        .unwrap();
        assert!(mask.keep[0], "informative feature rejected");
        assert!(mask.kept() <= 3, "too many noise features kept: {}", mask.kept());
    }

    #[test]
    fn all_noise_falls_back_to_one_feature() {
        let mut rng = seed::rng_from(5);
        let x: Vec<Vec<f64>> =
            (0..60).map(|_| (0..6).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let y: Vec<usize> = (0..60).map(|i| i % 2).collect();
        let mask =
            select_features(&x, &names(6), &SelectionTarget::Classes(y), 15, 0.05, 3).unwrap();
        assert_eq!(mask.kept(), 1);
    }

    #[test]
    fn too_few_iterations_is_a_domain_error() {
        let (x, y) = informative_vs_noise(40, 2);
        assert!(
            select_features(&x, &names(10), &SelectionTarget::Classes(y), 0, 0.05, 1).is_err()
        );
    }

    #[test]
    fn degenerate_labels_are_rejected() {
        let (x, _) = informative_vs_noise(40, 3);
        let y = vec![1usize; 40];
        assert!(
            select_features(&x, &names(10), &SelectionTarget::Classes(y), 15, 0.05, 1).is_err()
        );
    }

    #[test]
    fn regression_targets_work_too() {
        let mut rng = seed::rng_from(11);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..120 {
            let signal: f64 = rng.random_range(-2.0..2.0);
            let row =
                vec![signal, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            y.push(3.0 * signal + rng.random_range(-0.01..0.01));
            x.push(row);
        }
        let mask =
            select_features(&x, &names(3), &SelectionTarget::Targets(y), 15, 0.05, 9).unwrap();
        assert!(mask.keep[0]);
    }

    #[test]
    fn binomial_test_matches_hand_values() {
        // P(X >= 15 | n=20, 1/2) = 0.0207...; doubled is within alpha 0.05.
        assert!(binomial_two_sided_p(15, 20) < 0.05);
        assert!(binomial_two_sided_p(13, 20) > 0.05);
        assert!((binomial_two_sided_p(10, 20) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn selection_soundness_across_seeds() {
        // The informative feature must be kept in at least 95 of 100 seeded
        // repetitions on the 200-row synthetic dataset.
        let (x, y) = informative_vs_noise(200, 77);
        let mut kept = 0;
        for rep in 0..100u64 {
            let mask = select_features(
                &x,
                &names(10),
                &SelectionTarget::Classes(y.clone()),
                20,
                0.05,
                rep,
            )
            .unwrap();
            if mask.keep[0] {
                kept += 1;
            }
        }
        assert!(kept >= 95, "informative feature kept only {kept}/100 times");
    }
}
