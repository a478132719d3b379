//! Benchmark functions, instance transformations, evaluation accounting, and
//! low-discrepancy sampling.
//!
//! An instance is a catalog function composed with a seeded shift, an
//! orthogonal rotation, and a value offset. Construction is a pure function
//! of `(function_id, instance_id, dim)`, so instances are identical across
//! machines and experiments.

pub mod functions;
mod sampling;

pub use functions::{CATALOG, FunctionGroup, FunctionSpec};
pub use sampling::low_discrepancy_sample;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;
use functions::FunctionAux;

/// Search domain bounds, every dimension.
pub const DOMAIN: (f64, f64) = (-5.0, 5.0);

/// Fixed base so instance construction is independent of any experiment seed.
const INSTANCE_SEED_BASE: u64 = 0x70726f6265; // "probe"

/// A shifted/rotated benchmark function with known optimum.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub function_id: u32,
    pub instance_id: u32,
    pub dim: usize,
    /// Optimum location; each coordinate in [-4, 4].
    pub shift: Vec<f64>,
    /// Orthogonal transformation applied after the shift (identity for
    /// separable catalog members).
    pub rotation: DMatrix<f64>,
    /// Optimum value offset.
    pub f_opt: f64,
    aux: FunctionAux,
    rotated: bool,
}

/// Strict function-evaluation accounting: `used <= limit` at all times and
/// every evaluation increments `used` by exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    used: u64,
    limit: u64,
}

impl EvalBudget {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::domain("budget limit must be positive"));
        }
        Ok(EvalBudget { used: 0, limit })
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    /// Fail early when a planned batch of evaluations cannot fit.
    pub fn ensure(&self, requested: u64) -> Result<()> {
        if requested > self.remaining() {
            return Err(Error::Budget { used: self.used, limit: self.limit, requested });
        }
        Ok(())
    }

    fn charge_one(&mut self) -> Result<()> {
        self.ensure(1)?;
        self.used += 1;
        Ok(())
    }
}

/// JSON-exportable instance description.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct InstanceDescription {
    pub function_id: u32,
    pub instance_id: u32,
    pub dim: usize,
    pub f_opt: f64,
    pub shift: Vec<f64>,
    pub rotation_seed: u64,
}

/// Construct the instance for `(function_id, instance_id, dim)`.
pub fn make_instance(function_id: u32, instance_id: u32, dim: usize) -> Result<ProblemInstance> {
    let spec = functions::spec(function_id).ok_or(Error::Catalog(function_id))?;
    if instance_id < 1 {
        return Err(Error::domain("instance_id must be >= 1"));
    }
    if dim < 2 {
        return Err(Error::domain(format!("dim must be >= 2, got {dim}")));
    }

    let mut rng = seed::rng(
        INSTANCE_SEED_BASE,
        "bench.instance",
        &[function_id as u64, instance_id as u64, dim as u64],
    );

    let shift: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
    let rotation = if spec.rotated {
        random_rotation(dim, &mut rng)
    } else {
        DMatrix::identity(dim, dim)
    };
    let f_opt = rng.random_range(-100.0..100.0);
    let aux = make_aux(function_id, dim, &mut rng);

    Ok(ProblemInstance {
        function_id,
        instance_id,
        dim,
        shift,
        rotation,
        f_opt,
        aux,
        rotated: spec.rotated,
    })
}

fn make_aux(function_id: u32, dim: usize, rng: &mut impl Rng) -> FunctionAux {
    if function_id != 12 {
        return FunctionAux::None;
    }
    // One dominant bump at the optimum plus twenty decoys of ascending
    // weight, scattered in the transformed space.
    let mut peaks = Vec::with_capacity(21);
    peaks.push(functions::Peak { center: vec![0.0; dim], weight: 10.0, height_scale: 30.0 });
    for i in 1..=20u32 {
        let center: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
        let weight = 1.1 + 8.0 * (i - 1) as f64 / 19.0;
        let height_scale = 10f64.powf(rng.random_range(0.0..3.0));
        peaks.push(functions::Peak { center, weight, height_scale });
    }
    FunctionAux::Peaks(peaks)
}

/// Orthogonal matrix from the QR factorization of a Gaussian matrix, with
/// column signs fixed by the diagonal of R so the result is unique.
fn random_rotation(dim: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let gauss = DMatrix::from_fn(dim, dim, |_, _| {
        rng.sample::<f64, _>(rand_distr::StandardNormal)
    });
    let qr = gauss.qr();
    let r_diag: Vec<f64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
    let mut q = qr.q();
    for (j, d) in r_diag.iter().enumerate() {
        if *d < 0.0 {
            for i in 0..dim {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

impl ProblemInstance {
    /// Evaluate at `x`, charging one unit of budget.
    pub fn evaluate(&self, x: &[f64], budget: &mut EvalBudget) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::domain(format!(
                "dimension mismatch: instance dim {}, point dim {}",
                self.dim,
                x.len()
            )));
        }
        for &v in x {
            if !(DOMAIN.0..=DOMAIN.1).contains(&v) {
                return Err(Error::domain(format!("coordinate {v} outside [{}, {}]", DOMAIN.0, DOMAIN.1)));
            }
        }
        budget.charge_one()?;

        let centered: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        let z = if self.rotated {
            let mut z = vec![0.0; self.dim];
            for (i, zi) in z.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, cj) in centered.iter().enumerate() {
                    acc += self.rotation[(i, j)] * cj;
                }
                *zi = acc;
            }
            z
        } else {
            centered
        };
        Ok(functions::base_value(self.function_id, &z, &self.aux) + self.f_opt)
    }

    /// The seed the generator used for this instance's transformations.
    pub fn construction_seed(&self) -> u64 {
        seed::derive(
            INSTANCE_SEED_BASE,
            "bench.instance",
            &[self.function_id as u64, self.instance_id as u64, self.dim as u64],
        )
    }

    pub fn description(&self) -> InstanceDescription {
        InstanceDescription {
            function_id: self.function_id,
            instance_id: self.instance_id,
            dim: self.dim,
            f_opt: self.f_opt,
            shift: self.shift.clone(),
            rotation_seed: self.construction_seed(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fresh_budget() -> EvalBudget {
        EvalBudget::new(1_000_000).unwrap()
    }

    #[test]
    fn construction_is_deterministic() {
        let a = make_instance(1, 1, 10).unwrap();
        let b = make_instance(1, 1, 10).unwrap();
        assert_eq!(a.shift, b.shift);
        assert_eq!(a.f_opt, b.f_opt);
        assert_eq!(a.rotation, b.rotation);
    }

    #[test]
    fn instances_differ_across_instance_ids() {
        let a = make_instance(1, 1, 10).unwrap();
        let b = make_instance(1, 2, 10).unwrap();
        assert_ne!(a.shift, b.shift);
    }

    #[test]
    fn unknown_function_is_a_catalog_error() {
        assert!(matches!(make_instance(999, 1, 10), Err(Error::Catalog(999))));
    }

    #[test]
    fn small_dim_is_a_domain_error() {
        assert!(matches!(make_instance(1, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn optimum_value_is_f_opt_for_all_catalog_functions() {
        for spec in &CATALOG {
            for iid in 1..=3 {
                let inst = make_instance(spec.id, iid, 10).unwrap();
                let mut budget = fresh_budget();
                let v = inst.evaluate(&inst.shift.clone(), &mut budget).unwrap();
                assert_abs_diff_eq!(v, inst.f_opt, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn sphere_unit_offset_adds_one() {
        let inst = make_instance(1, 1, 10).unwrap();
        let mut x = inst.shift.clone();
        x[0] += 1.0;
        let mut budget = fresh_budget();
        let v = inst.evaluate(&x, &mut budget).unwrap();
        assert_abs_diff_eq!(v, inst.f_opt + 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rotations_are_orthogonal() {
        for spec in &CATALOG {
            let inst = make_instance(spec.id, 1, 10).unwrap();
            let prod = inst.rotation.transpose() * &inst.rotation;
            for i in 0..10 {
                for j in 0..10 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (prod[(i, j)] - expect).abs() < 1e-9,
                        "{}: R^T R deviates at ({i},{j})",
                        spec.name
                    );
                }
            }
        }
    }

    #[test]
    fn strictly_convex_members_have_unique_minimum() {
        for fid in [1u32, 2, 8] {
            let inst = make_instance(fid, 1, 6).unwrap();
            let mut budget = fresh_budget();
            let mut rng = seed::rng_from(42);
            for _ in 0..100 {
                let x: Vec<f64> = (0..6).map(|_| rng.random_range(-5.0..5.0)).collect();
                let v = inst.evaluate(&x, &mut budget).unwrap();
                let off_optimum = x
                    .iter()
                    .zip(&inst.shift)
                    .any(|(a, b)| (a - b).abs() > 1e-12);
                assert!(v - inst.f_opt >= 0.0);
                if off_optimum {
                    assert!(v - inst.f_opt > 0.0);
                }
            }
        }
    }

    #[test]
    fn budget_is_charged_exactly_once_per_evaluation() {
        let inst = make_instance(1, 1, 4).unwrap();
        let mut budget = EvalBudget::new(2).unwrap();
        let x = vec![0.0; 4];
        inst.evaluate(&x, &mut budget).unwrap();
        inst.evaluate(&x, &mut budget).unwrap();
        assert_eq!(budget.used(), 2);
        assert!(matches!(
            inst.evaluate(&x, &mut budget),
            Err(Error::Budget { used: 2, limit: 2, requested: 1 })
        ));
    }

    #[test]
    fn dimension_mismatch_is_a_domain_error() {
        let inst = make_instance(1, 1, 4).unwrap();
        let mut budget = fresh_budget();
        assert!(matches!(inst.evaluate(&[0.0; 3], &mut budget), Err(Error::Domain(_))));
    }

    #[test]
    fn out_of_domain_point_is_rejected() {
        let inst = make_instance(1, 1, 4).unwrap();
        let mut budget = fresh_budget();
        assert!(matches!(inst.evaluate(&[0.0, 0.0, 0.0, 5.5], &mut budget), Err(Error::Domain(_))));
    }
}
