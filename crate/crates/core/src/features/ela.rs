//! Ten landscape features from low-discrepancy samples, spanning the
//! y-distribution, meta-model, dispersion, and information-content families.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::features::{FeatureVector, sample_excess_kurtosis, sample_skewness};

pub const ELA_FEATURE_COUNT: usize = 10;

const NAMES: [&str; ELA_FEATURE_COUNT] = [
    "fitness_skewness",
    "fitness_kurtosis",
    "histogram_peaks",
    "lin_r2_adj",
    "lin_intercept",
    "quad_r2_adj",
    "quad_cond",
    "dispersion_ratio_02",
    "ic_h_max",
    "ic_eps_s",
];

const HISTOGRAM_BINS: usize = 10;
const DISPERSION_QUANTILE: f64 = 0.02;
const IC_SETTLING_THRESHOLD: f64 = 0.05;
const IC_EPS_EXPONENTS: (f64, f64) = (-5.0, 15.0);
const IC_EPS_STEPS: usize = 201;

/// Compute the ten-feature vector from at least 50 evaluated sample points.
pub fn ela_features(samples: &[(Vec<f64>, f64)]) -> Result<FeatureVector> {
    if samples.len() < 50 {
        return Err(Error::domain(format!(
            "landscape features need >= 50 samples, got {}",
            samples.len()
        )));
    }
    let dim = samples[0].0.len();
    if samples.iter().any(|(x, _)| x.len() != dim) {
        return Err(Error::domain("sample points disagree on dimension"));
    }
    let ys: Vec<f64> = samples.iter().map(|(_, y)| *y).collect();

    let (lin_r2_adj, lin_intercept) = linear_model(samples, dim);
    let (quad_r2_adj, quad_cond) = quadratic_model(samples, dim);
    let (h_max, eps_s) = information_content(samples);

    let raw = vec![
        sample_skewness(&ys),
        sample_excess_kurtosis(&ys),
        histogram_peaks(&ys) as f64,
        lin_r2_adj,
        lin_intercept,
        quad_r2_adj,
        quad_cond,
        dispersion_ratio(samples),
        h_max,
        eps_s,
    ];
    Ok(FeatureVector::from_raw(NAMES.iter().map(|s| s.to_string()).collect(), raw))
}

fn ols(design: DMatrix<f64>, ys: &[f64]) -> Option<DVector<f64>> {
    let y = DVector::from_column_slice(ys);
    design.svd(true, true).solve(&y, 1e-12).ok()
}

fn r_squared(design: &DMatrix<f64>, beta: &DVector<f64>, ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mean = ys.iter().sum::<f64>() / n;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
    if ss_tot <= 0.0 {
        return 0.0;
    }
    let fitted = design * beta;
    let ss_res: f64 = ys.iter().zip(fitted.iter()).map(|(y, f)| (y - f) * (y - f)).sum();
    1.0 - ss_res / ss_tot
}

fn adjusted(r2: f64, n: usize, p: usize) -> f64 {
    if n <= p + 1 {
        return r2;
    }
    1.0 - (1.0 - r2) * (n as f64 - 1.0) / (n as f64 - p as f64 - 1.0)
}

/// (adjusted r-squared, intercept) of the first-order model.
fn linear_model(samples: &[(Vec<f64>, f64)], dim: usize) -> (f64, f64) {
    let n = samples.len();
    let design = DMatrix::from_fn(n, dim + 1, |r, c| {
        if c == 0 { 1.0 } else { samples[r].0[c - 1] }
    });
    let ys: Vec<f64> = samples.iter().map(|(_, y)| *y).collect();
    match ols(design.clone(), &ys) {
        Some(beta) => (adjusted(r_squared(&design, &beta, &ys), n, dim), beta[0]),
        None => (0.0, 0.0),
    }
}

/// (adjusted r-squared, coefficient condition) of the pure quadratic model.
fn quadratic_model(samples: &[(Vec<f64>, f64)], dim: usize) -> (f64, f64) {
    let n = samples.len();
    let p = 2 * dim;
    let design = DMatrix::from_fn(n, p + 1, |r, c| {
        if c == 0 {
            1.0
        } else if c <= dim {
            samples[r].0[c - 1]
        } else {
            let v = samples[r].0[c - dim - 1];
            v * v
        }
    });
    let ys: Vec<f64> = samples.iter().map(|(_, y)| *y).collect();
    match ols(design.clone(), &ys) {
        Some(beta) => {
            let r2 = adjusted(r_squared(&design, &beta, &ys), n, p);
            let quad: Vec<f64> = (dim + 1..=2 * dim).map(|i| beta[i].abs()).collect();
            let max = quad.iter().cloned().fold(0.0f64, f64::max);
            let min = quad.iter().cloned().fold(f64::INFINITY, f64::min).max(1e-12);
            (r2, max / min)
        }
        None => (0.0, 0.0),
    }
}

/// Strict local maxima of the fitness histogram; a constant sample has one.
fn histogram_peaks(ys: &[f64]) -> usize {
    let min = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return 1;
    }
    let mut counts = [0f64; HISTOGRAM_BINS];
    let width = (max - min) / HISTOGRAM_BINS as f64;
    for &y in ys {
        let b = (((y - min) / width) as usize).min(HISTOGRAM_BINS - 1);
        counts[b] += 1.0;
    }
    let neighbor = |i: isize| -> f64 {
        if i < 0 || i as usize >= HISTOGRAM_BINS { 0.0 } else { counts[i as usize] }
    };
    (0..HISTOGRAM_BINS as isize)
        .filter(|&i| neighbor(i) > neighbor(i - 1) && neighbor(i) > neighbor(i + 1))
        .count()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn mean_pairwise_distance(points: &[&Vec<f64>]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut count = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            sum += euclidean(points[i], points[j]);
            count += 1;
        }
    }
    sum / count as f64
}

/// Mean pairwise distance among the best 2% of samples over the mean
/// pairwise distance among all samples.
fn dispersion_ratio(samples: &[(Vec<f64>, f64)]) -> f64 {
    let n = samples.len();
    let q = ((n as f64 * DISPERSION_QUANTILE).ceil() as usize).max(2);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        samples[a].1.partial_cmp(&samples[b].1).expect("finite fitness").then(a.cmp(&b))
    });
    let best: Vec<&Vec<f64>> = order[..q].iter().map(|&i| &samples[i].0).collect();
    let all: Vec<&Vec<f64>> = samples.iter().map(|(x, _)| x).collect();
    let denom = mean_pairwise_distance(&all);
    if denom <= 0.0 { 0.0 } else { mean_pairwise_distance(&best) / denom }
}

/// Information content of the fitness sequence along a nearest-neighbor
/// tour: (h_max, settling sensitivity eps_s).
fn information_content(samples: &[(Vec<f64>, f64)]) -> (f64, f64) {
    let n = samples.len();
    // Greedy nearest-neighbor tour from the first point, ties by index.
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut current = 0usize;
    visited[0] = true;
    tour.push(0);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_dist = f64::INFINITY;
        for (j, seen) in visited.iter().enumerate() {
            if !seen {
                let d = euclidean(&samples[current].0, &samples[j].0);
                if d < best_dist {
                    best_dist = d;
                    best = j;
                }
            }
        }
        visited[best] = true;
        tour.push(best);
        current = best;
    }

    // Fitness change rate along the tour.
    let mut rates = Vec::with_capacity(n - 1);
    for w in tour.windows(2) {
        let d = euclidean(&samples[w[0]].0, &samples[w[1]].0);
        let dy = samples[w[1]].1 - samples[w[0]].1;
        rates.push(if d > 0.0 { dy / d } else { 0.0 });
    }

    let mut h_max = 0.0f64;
    let mut eps_s: Option<f64> = None;
    for step in 0..IC_EPS_STEPS {
        let exponent = IC_EPS_EXPONENTS.0
            + (IC_EPS_EXPONENTS.1 - IC_EPS_EXPONENTS.0) * step as f64
                / (IC_EPS_STEPS - 1) as f64;
        let eps = 10f64.powf(exponent);
        let h = symbol_entropy(&rates, eps);
        h_max = h_max.max(h);
        if eps_s.is_none() && h < IC_SETTLING_THRESHOLD {
            eps_s = Some(exponent);
        }
    }
    (h_max, eps_s.unwrap_or(IC_EPS_EXPONENTS.1))
}

/// Entropy (log base 6) over the six unequal consecutive-symbol pairs of
/// the thresholded rate sequence.
fn symbol_entropy(rates: &[f64], eps: f64) -> f64 {
    let symbols: Vec<i8> = rates
        .iter()
        .map(|&r| {
            if r < -eps {
                -1
            } else if r > eps {
                1
            } else {
                0
            }
        })
        .collect();
    let mut counts = [[0u64; 3]; 3];
    let mut total = 0u64;
    for w in symbols.windows(2) {
        counts[(w[0] + 1) as usize][(w[1] + 1) as usize] += 1;
        total += 1;
    }
    if total == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for (a, row) in counts.iter().enumerate() {
        for (b, &count) in row.iter().enumerate() {
            if a != b && count > 0 {
                let p = count as f64 / total as f64;
                h -= p * p.log(6.0);
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{EvalBudget, low_discrepancy_sample, make_instance};
    use crate::seed;
    use rand::Rng;

    fn grid_samples<F: Fn(&[f64]) -> f64>(n: usize, dim: usize, f: F) -> Vec<(Vec<f64>, f64)> {
        let mut rng = seed::rng_from(31);
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
                let y = f(&x);
                (x, y)
            })
            .collect()
    }

    fn feature(fv: &FeatureVector, name: &str) -> f64 {
        let idx = fv.names.iter().position(|n| n == name).unwrap();
        fv.values[idx]
    }

    #[test]
    fn linear_function_fits_exactly() {
        let samples = grid_samples(200, 4, |x| 2.0 * x[0] - x[1] + 0.5 * x[3] + 7.0);
        let fv = ela_features(&samples).unwrap();
        assert!((feature(&fv, "lin_r2_adj") - 1.0).abs() < 1e-6);
        assert!((feature(&fv, "lin_intercept") - 7.0).abs() < 1e-6);
    }

    #[test]
    fn pure_quadratic_fits_exactly() {
        let samples = grid_samples(300, 3, |x| x.iter().map(|v| v * v).sum::<f64>());
        let fv = ela_features(&samples).unwrap();
        assert!((feature(&fv, "quad_r2_adj") - 1.0).abs() < 1e-6);
        // Equal quadratic coefficients give condition 1.
        assert!((feature(&fv, "quad_cond") - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_fitness_sanitizes_shape_features_to_zero() {
        let samples = grid_samples(100, 3, |_| 42.0);
        let fv = ela_features(&samples).unwrap();
        assert_eq!(feature(&fv, "fitness_skewness"), 0.0);
        assert_eq!(feature(&fv, "fitness_kurtosis"), 0.0);
        assert!(fv.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn sphere_sampled_symmetrically_has_small_skewness() {
        // Squared distance from the center of a symmetric low-discrepancy
        // sample: the fitness distribution is mildly right-skewed, far from
        // the skewness of e.g. an exponential-looking landscape.
        let inst = make_instance(1, 1, 10).unwrap();
        let mut budget = EvalBudget::new(500).unwrap();
        let samples = low_discrepancy_sample(&inst, 500, 1, &mut budget).unwrap();
        let centered: Vec<(Vec<f64>, f64)> = samples
            .into_iter()
            .map(|(x, _)| {
                let y: f64 = x.iter().map(|v| v * v).sum();
                (x, y)
            })
            .collect();
        let fv = ela_features(&centered).unwrap();
        let skew = feature(&fv, "fitness_skewness");
        assert!(skew.abs() < 0.25, "sphere skewness {skew} unexpectedly large");
    }

    #[test]
    fn too_few_samples_is_a_domain_error() {
        let samples = grid_samples(49, 3, |x| x[0]);
        assert!(ela_features(&samples).is_err());
    }

    #[test]
    fn deterministic_in_inputs() {
        let samples = grid_samples(120, 5, |x| x.iter().sum::<f64>().sin());
        assert_eq!(ela_features(&samples).unwrap(), ela_features(&samples).unwrap());
    }

    #[test]
    fn dispersion_ratio_is_small_for_a_single_funnel() {
        // Best points of a sphere cluster near the optimum, so their spread
        // is far below the global spread.
        let samples = grid_samples(400, 5, |x| x.iter().map(|v| v * v).sum::<f64>());
        let fv = ela_features(&samples).unwrap();
        let ratio = feature(&fv, "dispersion_ratio_02");
        assert!(ratio > 0.0 && ratio < 0.8, "funnel dispersion ratio {ratio}");
    }

    #[test]
    fn information_content_detects_structure_scale() {
        let smooth = grid_samples(200, 3, |x| x.iter().sum::<f64>());
        let fv = ela_features(&smooth).unwrap();
        let h_max = feature(&fv, "ic_h_max");
        assert!((0.0..=1.0).contains(&h_max));
    }
}
