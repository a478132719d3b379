//! Rotation forest classifier.
//!
//! Per tree, the feature space is partitioned into small subsets; each
//! subset gets a principal-component basis estimated on a class-and-row
//! bootstrap, and the block-diagonal assembly of those bases rotates the
//! full dataset before an unpruned CART is grown on it.
//!
//! Reference: Rodriguez, Kuncheva & Alonso, Rotation Forest: A New
//! Classifier Ensemble Method, IEEE TPAMI 28(10), 2006.

use rand::Rng;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::forest::check_classes;
use crate::models::tree::{GrowSettings, TreeTarget, grow};
use crate::models::{ForestModel, ModelKind, validate_matrix};
use crate::seed;

const SUBSET_SIZE: usize = 3;
const BOOTSTRAP_FRACTION: f64 = 0.75;
const POWER_ITERATIONS: usize = 100;
const POWER_TOLERANCE: f64 = 1e-9;

/// One feature subset and its component basis (rows are components).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RotationBlock {
    pub features: Vec<usize>,
    pub components: Vec<Vec<f64>>,
}

/// Project a row through the block-diagonal rotation.
pub(crate) fn rotate_row(row: &[f64], blocks: &[RotationBlock]) -> Vec<f64> {
    let mut out = Vec::with_capacity(row.len());
    for block in blocks {
        for component in &block.components {
            let v: f64 =
                component.iter().zip(&block.features).map(|(c, &f)| c * row[f]).sum();
            out.push(v);
        }
    }
    out
}

/// Principal components of a small covariance matrix via power iteration
/// with deflation; degenerate directions fall back to an orthonormal
/// completion of the canonical basis.
fn principal_components(cov: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = cov.len();
    let mut remaining: Vec<Vec<f64>> = cov.to_vec();
    let mut components: Vec<Vec<f64>> = Vec::with_capacity(k);

    for _ in 0..k {
        // Start from the dominant diagonal direction.
        let start = (0..k)
            .max_by(|&a, &b| remaining[a][a].partial_cmp(&remaining[b][b]).unwrap())
            .unwrap_or(0);
        let mut v = vec![0.0; k];
        v[start] = 1.0;
        let mut converged = false;
        for _ in 0..POWER_ITERATIONS {
            let mut next = vec![0.0; k];
            for (i, next_i) in next.iter_mut().enumerate() {
                *next_i = remaining[i].iter().zip(&v).map(|(m, vj)| m * vj).sum();
            }
            let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-18 {
                break;
            }
            for n in &mut next {
                *n /= norm;
            }
            let delta: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            let flipped: f64 = next.iter().zip(&v).map(|(a, b)| (a + b).abs()).sum();
            v = next;
            if delta.min(flipped) < POWER_TOLERANCE {
                converged = true;
                break;
            }
        }
        let eigenvalue: f64 = {
            let mut mv = vec![0.0; k];
            for (i, mv_i) in mv.iter_mut().enumerate() {
                *mv_i = remaining[i].iter().zip(&v).map(|(m, vj)| m * vj).sum();
            }
            mv.iter().zip(&v).map(|(a, b)| a * b).sum()
        };
        if !converged && eigenvalue.abs() < 1e-15 {
            break;
        }
        for i in 0..k {
            for j in 0..k {
                remaining[i][j] -= eigenvalue * v[i] * v[j];
            }
        }
        components.push(v);
    }

    complete_orthonormal(components, k)
}

/// Gram-Schmidt the found directions and fill up to `k` with canonical axes.
fn complete_orthonormal(mut basis: Vec<Vec<f64>>, k: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k);
    basis.extend((0..k).map(|i| {
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        e
    }));
    for mut v in basis {
        for done in &out {
            let proj: f64 = v.iter().zip(done).map(|(a, b)| a * b).sum();
            for (vi, di) in v.iter_mut().zip(done) {
                *vi -= proj * di;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for vi in &mut v {
                *vi /= norm;
            }
            out.push(v);
            if out.len() == k {
                break;
            }
        }
    }
    out
}

fn build_blocks(
    x: &[Vec<f64>],
    y: &[usize],
    n_classes: usize,
    rng: &mut impl Rng,
) -> Vec<RotationBlock> {
    let p = x[0].len();
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(rng);

    let mut blocks = Vec::new();
    for chunk in order.chunks(SUBSET_SIZE) {
        let features = chunk.to_vec();

        // Class subset: each present class joins with probability 1/2;
        // an empty pick falls back to every class.
        let mut class_pick: Vec<bool> = (0..n_classes).map(|_| rng.random::<f64>() < 0.5).collect();
        if !class_pick.iter().any(|&p| p) {
            class_pick = vec![true; n_classes];
        }
        let mut pool: Vec<usize> =
            (0..x.len()).filter(|&r| class_pick[y[r]]).collect();
        if pool.len() < 2 {
            pool = (0..x.len()).collect();
        }
        // 75% of the pool, without replacement.
        pool.shuffle(rng);
        let take = ((pool.len() as f64 * BOOTSTRAP_FRACTION).ceil() as usize).max(2).min(pool.len());
        let sample = &pool[..take];

        let k = features.len();
        let mut means = vec![0.0; k];
        for &r in sample {
            for (m, &f) in means.iter_mut().zip(&features) {
                *m += x[r][f];
            }
        }
        for m in &mut means {
            *m /= sample.len() as f64;
        }
        let mut cov = vec![vec![0.0; k]; k];
        for &r in sample {
            for a in 0..k {
                let da = x[r][features[a]] - means[a];
                for b in 0..k {
                    let db = x[r][features[b]] - means[b];
                    cov[a][b] += da * db / sample.len() as f64;
                }
            }
        }
        blocks.push(RotationBlock { features, components: principal_components(&cov) });
    }
    blocks
}

/// Train a rotation forest on equal-length input rows.
pub fn train_rotation_forest(
    x: &[Vec<f64>],
    y: &[usize],
    n_trees: usize,
    model_seed: u64,
) -> Result<ForestModel> {
    validate_matrix(x, y.len(), n_trees)?;
    if x.len() < 2 {
        return Err(Error::domain("rotation forest needs at least 2 rows"));
    }
    if x[0].len() < 4 {
        return Err(Error::domain("rotation forest needs input width >= 4"));
    }
    let n_classes = check_classes(y)?;

    let built: Vec<_> = (0..n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(model_seed, "rotation.tree", &[t as u64]);
            let blocks = build_blocks(x, y, n_classes, &mut rng);
            let rotated: Vec<Vec<f64>> = x.iter().map(|row| rotate_row(row, &blocks)).collect();
            let rows: Vec<usize> = (0..x.len()).collect();
            // Unpruned CART on the rotated data, all features as candidates.
            let settings = GrowSettings { mtry: 0, min_leaf: 1 };
            let grown = grow(
                &rotated,
                &rows,
                &TreeTarget::Classes { y, n_classes },
                &settings,
                &mut rng,
            );
            (grown.tree, blocks)
        })
        .collect();

    let (trees, rotations): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    Ok(ForestModel {
        kind: ModelKind::RotationForest,
        seed: model_seed,
        n_classes,
        trees,
        rotations: Some(rotations),
        intervals: None,
    })
}
