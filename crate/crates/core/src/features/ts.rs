//! The fixed 22-feature time-series catalog.

use crate::error::{Error, Result};
use crate::features::{FeatureVector, sample_excess_kurtosis, sample_skewness};
use crate::trajectory::Trajectory;

pub const TS_FEATURE_COUNT: usize = 22;

const NAMES: [&str; TS_FEATURE_COUNT] = [
    "mean",
    "variance",
    "std_dev",
    "skewness",
    "kurtosis",
    "min",
    "max",
    "median",
    "first",
    "last",
    "abs_energy",
    "mean_abs_change",
    "autocorr_lag1",
    "autocorr_lag2",
    "autocorr_lag3",
    "trend_slope",
    "trend_intercept",
    "trend_r2",
    "count_above_mean",
    "longest_run_below_mean",
    "local_maxima",
    "binned_entropy",
];

/// Extract the fixed catalog from a trajectory of length >= 3.
pub fn ts_features(trajectory: &Trajectory) -> Result<FeatureVector> {
    let xs = &trajectory.values;
    let n = xs.len();
    if n < 3 {
        return Err(Error::domain(format!("time-series features need length >= 3, got {n}")));
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let variance = xs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf;

    let mut sorted = xs.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite trajectory values"));
    let median =
        if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };

    let abs_energy = xs.iter().map(|v| v * v).sum::<f64>();
    let mean_abs_change =
        xs.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>() / (nf - 1.0);

    let (slope, intercept, r2) = linear_trend(xs, mean, nf);

    let count_above_mean = xs.iter().filter(|&&v| v > mean).count() as f64;
    let longest_run_below = {
        let mut longest = 0usize;
        let mut run = 0usize;
        for &v in xs {
            if v < mean {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 0;
            }
        }
        longest as f64
    };
    let local_maxima =
        xs.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count() as f64;

    let raw = vec![
        mean,
        variance,
        variance.sqrt(),
        sample_skewness(xs),
        sample_excess_kurtosis(xs),
        sorted[0],
        sorted[n - 1],
        median,
        xs[0],
        xs[n - 1],
        abs_energy,
        mean_abs_change,
        autocorrelation(xs, mean, variance, 1),
        autocorrelation(xs, mean, variance, 2),
        autocorrelation(xs, mean, variance, 3),
        slope,
        intercept,
        r2,
        count_above_mean,
        longest_run_below,
        local_maxima,
        binned_entropy(xs, sorted[0], sorted[n - 1], 10),
    ];
    Ok(FeatureVector::from_raw(NAMES.iter().map(|s| s.to_string()).collect(), raw))
}

/// Lag-k autocorrelation with the n-normalized convention; 0 for constant
/// or too-short input.
fn autocorrelation(xs: &[f64], mean: f64, variance: f64, lag: usize) -> f64 {
    let n = xs.len();
    if variance <= 0.0 || n <= lag {
        return 0.0;
    }
    let cov: f64 = (0..n - lag).map(|i| (xs[i] - mean) * (xs[i + lag] - mean)).sum();
    cov / (n as f64 * variance)
}

/// Least-squares line over positions 0..n: (slope, intercept, r-squared).
fn linear_trend(xs: &[f64], mean: f64, nf: f64) -> (f64, f64, f64) {
    let t_mean = (nf - 1.0) / 2.0;
    let mut cov = 0.0;
    let mut t_var = 0.0;
    for (t, v) in xs.iter().enumerate() {
        let dt = t as f64 - t_mean;
        cov += dt * (v - mean);
        t_var += dt * dt;
    }
    let slope = cov / t_var;
    let intercept = mean - slope * t_mean;
    let ss_tot: f64 = xs.iter().map(|v| (v - mean) * (v - mean)).sum();
    if ss_tot <= 0.0 {
        return (slope, intercept, 0.0);
    }
    let ss_res: f64 = xs
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let fit = intercept + slope * t as f64;
            (v - fit) * (v - fit)
        })
        .sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}

/// Shannon entropy of a fixed-width histogram, natural log.
fn binned_entropy(xs: &[f64], min: f64, max: f64, bins: usize) -> f64 {
    if max <= min {
        return 0.0;
    }
    let mut counts = vec![0usize; bins];
    let width = (max - min) / bins as f64;
    for &v in xs {
        let b = (((v - min) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let n = xs.len() as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}
