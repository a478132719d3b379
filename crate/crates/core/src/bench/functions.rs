//! The benchmark function catalog.
//!
//! Twelve continuous functions spanning the five classic difficulty groups:
//! separable, low conditioning, high conditioning, multimodal with adequate
//! global structure, and multimodal with weak structure. Every base function
//! satisfies `base(0) = 0` with its optimum at the origin of the transformed
//! space, so an instance's optimum value is exactly its `f_opt` offset.

use std::f64::consts::PI;

/// Difficulty group a catalog function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FunctionGroup {
    Separable,
    LowConditioning,
    HighConditioning,
    MultimodalStructured,
    MultimodalWeak,
}

/// Static description of one catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct FunctionSpec {
    pub id: u32,
    pub name: &'static str,
    pub group: FunctionGroup,
    /// Whether instances of this function carry a random rotation.
    /// Separable members keep the identity so their structure survives.
    pub rotated: bool,
}

pub const CATALOG: [FunctionSpec; 12] = [
    FunctionSpec { id: 1, name: "sphere", group: FunctionGroup::Separable, rotated: false },
    FunctionSpec { id: 2, name: "ellipsoid", group: FunctionGroup::Separable, rotated: false },
    FunctionSpec { id: 3, name: "rastrigin", group: FunctionGroup::Separable, rotated: true },
    FunctionSpec { id: 4, name: "linear_slope", group: FunctionGroup::Separable, rotated: false },
    FunctionSpec {
        id: 5,
        name: "attractive_sector",
        group: FunctionGroup::LowConditioning,
        rotated: true,
    },
    FunctionSpec {
        id: 6,
        name: "step_ellipsoid",
        group: FunctionGroup::LowConditioning,
        rotated: true,
    },
    FunctionSpec { id: 7, name: "rosenbrock", group: FunctionGroup::LowConditioning, rotated: true },
    FunctionSpec {
        id: 8,
        name: "ellipsoid_rotated",
        group: FunctionGroup::HighConditioning,
        rotated: true,
    },
    FunctionSpec {
        id: 9,
        name: "schaffers_f7",
        group: FunctionGroup::MultimodalStructured,
        rotated: true,
    },
    FunctionSpec {
        id: 10,
        name: "griewank_rosenbrock",
        group: FunctionGroup::MultimodalStructured,
        rotated: true,
    },
    FunctionSpec { id: 11, name: "schwefel", group: FunctionGroup::MultimodalWeak, rotated: true },
    FunctionSpec { id: 12, name: "gallagher", group: FunctionGroup::MultimodalWeak, rotated: true },
];

/// Look up a catalog entry by function id.
pub fn spec(function_id: u32) -> Option<&'static FunctionSpec> {
    CATALOG.iter().find(|s| s.id == function_id)
}

/// A Gaussian bump of the multi-peak landscape.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Peak {
    pub center: Vec<f64>,
    pub weight: f64,
    pub height_scale: f64,
}

/// Per-function auxiliary data generated at instance construction.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub enum FunctionAux {
    None,
    Peaks(Vec<Peak>),
}

/// Evaluate the base function `function_id` at the transformed point `z`.
///
/// `z` is the rotated, shifted coordinate; the caller adds `f_opt`.
pub fn base_value(function_id: u32, z: &[f64], aux: &FunctionAux) -> f64 {
    match function_id {
        1 => sphere(z),
        2 | 8 => ellipsoid(z),
        3 => rastrigin(z),
        4 => linear_slope(z),
        5 => attractive_sector(z),
        6 => step_ellipsoid(z),
        7 => rosenbrock(z),
        9 => schaffers_f7(z),
        10 => griewank_rosenbrock(z),
        11 => schwefel(z),
        12 => match aux {
            FunctionAux::Peaks(peaks) => gallagher(z, peaks),
            FunctionAux::None => unreachable!("multi-peak instance without peak data"),
        },
        _ => unreachable!("function id validated at construction"),
    }
}

fn sphere(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum()
}

fn ellipsoid(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (d - 1.0)) * v * v)
        .sum()
}

fn rastrigin(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let cos_sum: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    let sq_sum: f64 = z.iter().map(|v| v * v).sum();
    10.0 * (d - cos_sum) + sq_sum
}

/// V-shaped slope: constant gradient magnitude away from the optimum,
/// coordinate-wise conditioning up to 10.
fn linear_slope(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(i as f64 / (d - 1.0)) * v.abs())
        .sum()
}

fn attractive_sector(z: &[f64]) -> f64 {
    z.iter()
        .map(|&v| {
            let s = if v > 0.0 { 100.0 } else { 1.0 };
            (s * v) * (s * v)
        })
        .sum()
}

fn step_ellipsoid(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let stepped: f64 = z
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let zt = if v.abs() > 0.5 { (0.5 + v).floor() } else { (0.5 + 10.0 * v).floor() / 10.0 };
            10f64.powf(2.0 * i as f64 / (d - 1.0)) * zt * zt
        })
        .sum();
    0.1 * (z[0].abs() / 1e4).max(stepped)
}

fn rosenbrock(z: &[f64]) -> f64 {
    // Optimum moved to the origin: w = z + 1 puts it at the classic (1,...,1).
    let w: Vec<f64> = z.iter().map(|v| v + 1.0).collect();
    w.windows(2)
        .map(|p| {
            let a = p[0] * p[0] - p[1];
            let b = p[0] - 1.0;
            100.0 * a * a + b * b
        })
        .sum()
}

fn schaffers_f7(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let sum: f64 = z
        .windows(2)
        .map(|p| {
            let s = (p[0] * p[0] + p[1] * p[1]).sqrt();
            s.sqrt() * (1.0 + (50.0 * s.powf(0.2)).sin().powi(2))
        })
        .sum();
    let avg = sum / (d - 1.0);
    avg * avg
}

fn griewank_rosenbrock(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let w: Vec<f64> = z.iter().map(|v| v + 1.0).collect();
    let sum: f64 = w
        .windows(2)
        .map(|p| {
            let a = p[0] * p[0] - p[1];
            let b = p[0] - 1.0;
            let s = 100.0 * a * a + b * b;
            s / 4000.0 - s.cos()
        })
        .sum();
    10.0 / (d - 1.0) * sum + 10.0
}

/// Location of the single-coordinate maximizer of `u * sin(sqrt(u))`.
const SCHWEFEL_OPT: f64 = 420.968_746_227_503_6;

fn schwefel(z: &[f64]) -> f64 {
    // Window scale 4 keeps the deceptive neighbors outside the reachable
    // region, so the origin stays the global optimum for d <= ~60.
    fn g(u: f64) -> f64 {
        u * u.abs().sqrt().sin()
    }
    z.iter().map(|&v| g(SCHWEFEL_OPT) - g(4.0 * v + SCHWEFEL_OPT)).sum()
}

fn gallagher(z: &[f64], peaks: &[Peak]) -> f64 {
    let d = z.len() as f64;
    let mut best = f64::NEG_INFINITY;
    for peak in peaks {
        let dist_sq: f64 =
            z.iter().zip(&peak.center).map(|(a, b)| (a - b) * (a - b)).sum();
        let v = peak.weight * (-peak.height_scale * dist_sq / (2.0 * d)).exp();
        if v > best {
            best = v;
        }
    }
    let r = 10.0 - best;
    r * r
}
