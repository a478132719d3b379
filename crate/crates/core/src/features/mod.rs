//! Feature computation: the fixed time-series catalog extracted from
//! trajectories, shadow-feature selection, and the ten-feature baseline
//! computed from low-discrepancy samples of the landscape.

mod ela;
mod select;
mod ts;

pub use ela::{ELA_FEATURE_COUNT, ela_features};
pub use select::{
    SELECTION_DEFAULT_ALPHA, SELECTION_DEFAULT_ITERATIONS, SelectionMask, SelectionTarget,
    select_features,
};
pub use ts::{TS_FEATURE_COUNT, ts_features};

/// Clamp bound for infinite values; undefined moments map to 0.
pub const SANITIZE_CLAMP: f64 = 1e12;

/// Named feature values; sanitized, so never NaN or infinite.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
    /// True when sanitization clamped an infinite value; surfaced in run
    /// metadata.
    pub clamped: bool,
}

impl FeatureVector {
    pub(crate) fn from_raw(names: Vec<String>, raw: Vec<f64>) -> Self {
        let mut clamped = false;
        let values = raw
            .into_iter()
            .map(|v| {
                if v.is_nan() {
                    0.0
                } else if v.is_infinite() || v.abs() > SANITIZE_CLAMP {
                    clamped = true;
                    SANITIZE_CLAMP.copysign(v)
                } else {
                    v
                }
            })
            .collect();
        FeatureVector { names, values, clamped }
    }
}

/// Sample skewness from central moments; 0 when the variance vanishes.
pub(crate) fn sample_skewness(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if m2 <= 0.0 {
        return 0.0;
    }
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    m3 / m2.powf(1.5)
}

/// Sample excess kurtosis; 0 when the variance vanishes.
pub(crate) fn sample_excess_kurtosis(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if m2 <= 0.0 {
        return 0.0;
    }
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}
