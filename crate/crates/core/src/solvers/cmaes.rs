//! (mu/mu_w, lambda) CMA-ES with standard cumulation and learning-rate
//! settings.
//!
//! Reference: Hansen & Ostermeier, Completely Derandomized Self-Adaptation
//! in Evolution Strategies, Evolutionary Computation 9(2), 2001.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bench::{DOMAIN, EvalBudget, ProblemInstance};
use crate::error::Result;
use crate::seed;
use crate::solvers::{RunResult, SolverParams, TrajectoryLog};

/// Covariance condition number beyond which the run restarts.
const DEGENERACY_CONDITION: f64 = 1e14;

struct Strategy {
    mu: usize,
    weights: Vec<f64>,
    mu_eff: f64,
    c_sigma: f64,
    d_sigma: f64,
    c_c: f64,
    c_1: f64,
    c_mu: f64,
    chi_n: f64,
}

impl Strategy {
    fn new(dim: usize, lambda: usize) -> Self {
        let n = dim as f64;
        let mu = (lambda / 2).max(1);
        let mut weights: Vec<f64> =
            (0..mu).map(|i| ((lambda as f64 + 1.0) / 2.0).ln() - ((i + 1) as f64).ln()).collect();
        let sum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= sum;
        }
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

        let c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
        let d_sigma =
            1.0 + 2.0 * (0f64).max(((mu_eff - 1.0) / (n + 1.0)).sqrt() - 1.0) + c_sigma;
        let c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
        let c_1 = 2.0 / ((n + 1.3).powi(2) + mu_eff);
        let c_mu = (1.0 - c_1)
            .min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0).powi(2) + mu_eff));
        let chi_n = n.sqrt() * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

        Strategy { mu, weights, mu_eff, c_sigma, d_sigma, c_c, c_1, c_mu, chi_n }
    }
}

struct State {
    mean: DVector<f64>,
    sigma: f64,
    cov: DMatrix<f64>,
    path_sigma: DVector<f64>,
    path_c: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    eigenvalues_sqrt: DVector<f64>,
}

impl State {
    fn fresh(dim: usize, initial_step: f64, rng: &mut impl Rng) -> Self {
        let mean = DVector::from_fn(dim, |_, _| rng.random_range(-4.0..4.0));
        State {
            mean,
            sigma: initial_step,
            cov: DMatrix::identity(dim, dim),
            path_sigma: DVector::zeros(dim),
            path_c: DVector::zeros(dim),
            eigenvectors: DMatrix::identity(dim, dim),
            eigenvalues_sqrt: DVector::from_element(dim, 1.0),
        }
    }

    /// Refresh the eigendecomposition; report degeneracy instead of sampling
    /// from a broken distribution.
    fn decompose(&mut self) -> bool {
        if !self.sigma.is_finite() || self.sigma <= 0.0 || self.sigma > 1e12 {
            return false;
        }
        let symmetric = (&self.cov + self.cov.transpose()) * 0.5;
        let eigen = nalgebra::SymmetricEigen::new(symmetric);
        let mut min_ev = f64::INFINITY;
        let mut max_ev = f64::NEG_INFINITY;
        for &ev in eigen.eigenvalues.iter() {
            if !ev.is_finite() {
                return false;
            }
            min_ev = min_ev.min(ev);
            max_ev = max_ev.max(ev);
        }
        if min_ev <= 0.0 || max_ev / min_ev > DEGENERACY_CONDITION {
            return false;
        }
        self.eigenvalues_sqrt = eigen.eigenvalues.map(f64::sqrt);
        self.eigenvectors = eigen.eigenvectors;
        true
    }
}

pub fn run_cmaes(
    instance: &ProblemInstance,
    params: &SolverParams,
    generations: usize,
    run_seed: u64,
    budget: &mut EvalBudget,
) -> Result<RunResult> {
    if generations < 1 {
        return Err(crate::error::Error::domain("generations must be >= 1"));
    }
    let lambda = params.population;
    budget.ensure(lambda as u64 * generations as u64)?;

    let dim = instance.dim;
    let strategy = Strategy::new(dim, lambda);
    let initial_step = params.constant("initial_step", 2.0);
    let mut rng = seed::rng_from(run_seed);
    let mut state = State::fresh(dim, initial_step, &mut rng);
    let mut log = TrajectoryLog::with_capacity(lambda * generations);

    for generation in 0..generations {
        if !state.decompose() {
            log::debug!(
                "covariance degeneracy on f{} i{} at generation {generation}; restarting",
                instance.function_id,
                instance.instance_id
            );
            state = State::fresh(dim, initial_step, &mut rng);
            state.decompose();
        }

        // Sample and evaluate the population; the trajectory logs every
        // candidate in evaluation order.
        let mut candidates: Vec<(f64, DVector<f64>)> = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let z = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
            let scaled = state.eigenvalues_sqrt.component_mul(&z);
            let y = &state.eigenvectors * scaled;
            let mut x = &state.mean + state.sigma * &y;
            for v in x.iter_mut() {
                *v = v.clamp(DOMAIN.0, DOMAIN.1);
            }
            let fitness = instance.evaluate(x.as_slice(), budget)?;
            log.push(fitness);
            // Selection works on the repaired point.
            let y_repaired = (&x - &state.mean) / state.sigma;
            candidates.push((fitness, y_repaired));
        }

        let mut order: Vec<usize> = (0..lambda).collect();
        order.sort_by(|&a, &b| {
            candidates[a].0.partial_cmp(&candidates[b].0).unwrap().then(a.cmp(&b))
        });

        let mut y_weighted = DVector::zeros(dim);
        for (rank, &idx) in order.iter().take(strategy.mu).enumerate() {
            y_weighted += strategy.weights[rank] * &candidates[idx].1;
        }
        state.mean += state.sigma * &y_weighted;

        // C^(-1/2) * <y>_w through the current eigenbasis.
        let mut inv_sqrt_y = DVector::zeros(dim);
        for (i, col) in state.eigenvectors.column_iter().enumerate() {
            let proj = col.dot(&y_weighted) / state.eigenvalues_sqrt[i];
            inv_sqrt_y += proj * col;
        }
        state.path_sigma = (1.0 - strategy.c_sigma) * &state.path_sigma
            + (strategy.c_sigma * (2.0 - strategy.c_sigma) * strategy.mu_eff).sqrt() * inv_sqrt_y;

        let ps_norm = state.path_sigma.norm();
        let stall_guard = 1.0
            - (1.0 - strategy.c_sigma).powi(2 * (generation as i32 + 1));
        let h_sigma = if ps_norm / stall_guard.sqrt()
            < (1.4 + 2.0 / (dim as f64 + 1.0)) * strategy.chi_n
        {
            1.0
        } else {
            0.0
        };
        state.path_c = (1.0 - strategy.c_c) * &state.path_c
            + h_sigma
                * (strategy.c_c * (2.0 - strategy.c_c) * strategy.mu_eff).sqrt()
                * &y_weighted;

        let mut rank_mu = DMatrix::zeros(dim, dim);
        for (rank, &idx) in order.iter().take(strategy.mu).enumerate() {
            let y = &candidates[idx].1;
            rank_mu += strategy.weights[rank] * y * y.transpose();
        }
        let pc_outer = &state.path_c * state.path_c.transpose();
        let discount = 1.0 - strategy.c_1 - strategy.c_mu;
        state.cov = discount * &state.cov
            + strategy.c_1
                * (pc_outer
                    + (1.0 - h_sigma) * strategy.c_c * (2.0 - strategy.c_c) * &state.cov)
            + strategy.c_mu * rank_mu;

        state.sigma *=
            (strategy.c_sigma / strategy.d_sigma * (ps_norm / strategy.chi_n - 1.0)).exp();
    }

    Ok(log.finish(run_seed))
}
