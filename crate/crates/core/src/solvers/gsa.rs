//! Generalized simulated-annealing probe.
//!
//! The probe exists to emit a short, cheap fitness trajectory, not to solve
//! the instance: no local search, one evaluation per proposal, exactly
//! `n_samples` evaluations per run. Proposals follow the heavy-tailed
//! Tsallis visiting distribution and worse moves are accepted under the
//! q-exponential generalized Metropolis rule.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::ln_gamma;

use crate::bench::{DOMAIN, EvalBudget, ProblemInstance};
use crate::error::{Error, Result};
use crate::seed;
use crate::solvers::{RunResult, TrajectoryLog};

/// Steps beyond this magnitude are folded straight back into the domain
/// anyway; clamping avoids overflow in the reflection arithmetic.
const STEP_TAIL_LIMIT: f64 = 1e8;

/// The four tunable probe parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SAConfig {
    /// Trajectory length in evaluations.
    pub n_samples: u32,
    pub initial_temp: f64,
    /// Visiting distribution parameter q_v.
    pub visit: f64,
    /// Acceptance parameter q_a.
    pub acceptance: f64,
}

/// Inclusive bounds of the tunable parameter space.
pub mod bounds {
    pub const N_SAMPLES: (u32, u32) = (5, 100);
    pub const INITIAL_TEMP: (f64, f64) = (0.02, 5e4);
    pub const VISIT: (f64, f64) = (1.5, 2.5);
    pub const ACCEPTANCE: (f64, f64) = (-1.1e4, -5.0);
}

impl Default for SAConfig {
    fn default() -> Self {
        SAConfig { n_samples: 100, initial_temp: 5230.0, visit: 2.62, acceptance: -5.0 }
    }
}

impl SAConfig {
    pub fn new(n_samples: u32, initial_temp: f64, visit: f64, acceptance: f64) -> Result<Self> {
        let config = SAConfig { n_samples, initial_temp, visit, acceptance };
        config.validate()?;
        Ok(config)
    }

    /// Check the probe parameter bounds.
    ///
    /// The untuned default `visit` lies above the tuning range, so `visit`
    /// is accepted up to the default's value.
    pub fn validate(&self) -> Result<()> {
        let (n_lo, n_hi) = bounds::N_SAMPLES;
        if !(n_lo..=n_hi).contains(&self.n_samples) {
            return Err(Error::domain(format!(
                "n_samples {} outside [{n_lo}, {n_hi}]",
                self.n_samples
            )));
        }
        let (t_lo, t_hi) = bounds::INITIAL_TEMP;
        if !(t_lo..=t_hi).contains(&self.initial_temp) {
            return Err(Error::domain(format!(
                "initial_temp {} outside [{t_lo}, {t_hi}]",
                self.initial_temp
            )));
        }
        let (v_lo, _) = bounds::VISIT;
        let v_hi = Self::default().visit.max(bounds::VISIT.1);
        if !(v_lo..=v_hi).contains(&self.visit) {
            return Err(Error::domain(format!("visit {} outside [{v_lo}, {v_hi}]", self.visit)));
        }
        let (a_lo, a_hi) = bounds::ACCEPTANCE;
        if !(a_lo..=a_hi).contains(&self.acceptance) {
            return Err(Error::domain(format!(
                "acceptance {} outside [{a_lo}, {a_hi}]",
                self.acceptance
            )));
        }
        Ok(())
    }
}

/// Annealing schedule: `T(1)` equals the initial temperature exactly and
/// `T(t)` decreases strictly for `visit > 1`.
pub fn temperature(t: u64, initial_temp: f64, visit: f64) -> f64 {
    debug_assert!(t >= 1);
    let qm1 = visit - 1.0;
    // Ratio first: at t = 1 it is exactly 1, so T(1) equals the initial
    // temperature bit for bit.
    initial_temp * ((2f64.powf(qm1) - 1.0) / ((1.0 + t as f64).powf(qm1) - 1.0))
}

/// Probability of accepting a proposal with energy difference `delta_e` at
/// acceptance temperature `t_accept` under the q-exponential rule.
pub fn acceptance_probability(delta_e: f64, q_accept: f64, t_accept: f64) -> f64 {
    if delta_e <= 0.0 {
        return 1.0;
    }
    let one_minus_qa = 1.0 - q_accept;
    let bracket = 1.0 - one_minus_qa * delta_e / t_accept;
    if bracket <= 0.0 { 0.0 } else { bracket.powf(1.0 / one_minus_qa) }
}

/// One heavy-tailed visiting step per coordinate, via the Gaussian-ratio
/// sampler for the Tsallis distribution at parameters `(visit, temp)`.
fn visiting_step(rng: &mut impl Rng, visit: f64, temp: f64, dim: usize) -> Vec<f64> {
    let qm1 = visit - 1.0;
    let factor2 = ((4.0 - visit) * qm1.ln()).exp();
    let factor3 = ((2.0 - visit) * 2f64.ln() / qm1).exp();
    let factor4_p = PI.sqrt() * factor2 / (factor3 * (3.0 - visit));
    let factor5 = 1.0 / qm1 - 0.5;
    let d1 = 2.0 - factor5;
    let s = 1.0 - factor5;
    // pi*s/sin(pi*s) has a removable singularity at s = 0.
    let ratio = if s.abs() < 1e-10 { 1.0 } else { PI * s / (PI * s).sin() };
    let factor6 = ratio / ln_gamma(d1).exp();

    let factor1 = (temp.ln() / qm1).exp();
    let sigma_x = (-qm1 * (factor6 / (factor4_p * factor1)).ln() / (3.0 - visit)).exp();

    (0..dim)
        .map(|_| {
            let gx: f64 = rng.sample(StandardNormal);
            let gy: f64 = rng.sample(StandardNormal);
            let den = (qm1 * gy.abs().ln() / (3.0 - visit)).exp();
            (sigma_x * gx / den).clamp(-STEP_TAIL_LIMIT, STEP_TAIL_LIMIT)
        })
        .collect()
}

/// Fold a coordinate back into `[lo, hi]` by reflection, keeping the
/// evaluation count exact (no rejection resampling).
fn reflect(value: f64, lo: f64, hi: f64) -> f64 {
    let range = hi - lo;
    let period = 2.0 * range;
    let mut offset = (value - lo).rem_euclid(period);
    if offset > range {
        offset = period - offset;
    }
    lo + offset
}

/// Run the probe for exactly `config.n_samples` evaluations.
pub fn run_gsa(
    instance: &ProblemInstance,
    config: &SAConfig,
    run_seed: u64,
    budget: &mut EvalBudget,
) -> Result<RunResult> {
    config.validate()?;
    budget.ensure(config.n_samples as u64)?;
    let dim = instance.dim;
    let mut rng = seed::rng_from(run_seed);
    let mut log = TrajectoryLog::with_capacity(config.n_samples as usize);

    let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(DOMAIN.0..DOMAIN.1)).collect();
    let mut energy = instance.evaluate(&x, budget)?;
    log.push(energy);

    for t in 1..config.n_samples as u64 {
        let temp = temperature(t, config.initial_temp, config.visit);
        let step = visiting_step(&mut rng, config.visit, temp, dim);
        let proposal: Vec<f64> = x
            .iter()
            .zip(&step)
            .map(|(xi, si)| reflect(xi + si, DOMAIN.0, DOMAIN.1))
            .collect();
        let proposal_energy = instance.evaluate(&proposal, budget)?;
        log.push(proposal_energy);

        let delta_e = proposal_energy - energy;
        let accepted = if delta_e <= 0.0 {
            true
        } else {
            let t_accept = temp / t as f64;
            let p = acceptance_probability(delta_e, config.acceptance, t_accept);
            rng.random::<f64>() < p
        };
        if accepted {
            x = proposal;
            energy = proposal_energy;
        }
    }

    Ok(log.finish(run_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::make_instance;

    fn probe(config: &SAConfig, run_seed: u64) -> RunResult {
        let inst = make_instance(1, 1, 10).unwrap();
        let mut budget = EvalBudget::new(10_000).unwrap();
        run_gsa(&inst, config, run_seed, &mut budget).unwrap()
    }

    #[test]
    fn default_config_produces_full_length_trajectory() {
        let r = probe(&SAConfig::default(), 42);
        assert_eq!(r.current.len(), 100);
        assert_eq!(r.best.len(), 100);
        assert_eq!(r.evals_used, 100);
    }

    #[test]
    fn tuned_length_is_respected() {
        let config = SAConfig::new(99, 23318.74, 2.185, -8848.35).unwrap();
        assert_eq!(probe(&config, 1).current.len(), 99);
    }

    #[test]
    fn identical_seeds_give_identical_runs() {
        let config = SAConfig::default();
        assert_eq!(probe(&config, 5), probe(&config, 5));
        assert_ne!(probe(&config, 5).current, probe(&config, 6).current);
    }

    #[test]
    fn out_of_bounds_config_is_rejected() {
        assert!(SAConfig::new(4, 100.0, 2.0, -10.0).is_err());
        assert!(SAConfig::new(50, 0.0, 2.0, -10.0).is_err());
        assert!(SAConfig::new(50, 100.0, 1.0, -10.0).is_err());
        assert!(SAConfig::new(50, 100.0, 2.0, -1.0).is_err());
        assert!(SAConfig::new(50, 100.0, 2.0, -10.0).is_ok());
    }

    #[test]
    fn budget_shortfall_is_a_budget_error() {
        let inst = make_instance(1, 1, 10).unwrap();
        let mut budget = EvalBudget::new(50).unwrap();
        let config = SAConfig::default();
        assert!(matches!(
            run_gsa(&inst, &config, 1, &mut budget),
            Err(Error::Budget { .. })
        ));
        assert_eq!(budget.used(), 0);
    }

    #[test]
    fn schedule_starts_at_initial_temperature_exactly() {
        for visit in [1.5, 2.0, 2.185, 2.5, 2.62] {
            assert_eq!(temperature(1, 5230.0, visit), 5230.0);
        }
    }

    #[test]
    fn schedule_strictly_decreases() {
        for visit in [1.5, 2.0, 2.62] {
            let mut prev = temperature(1, 1000.0, visit);
            for t in 2..200 {
                let cur = temperature(t, 1000.0, visit);
                assert!(cur < prev, "T not strictly decreasing at t={t}, visit={visit}");
                prev = cur;
            }
        }
    }

    #[test]
    fn zero_energy_difference_is_always_accepted() {
        assert_eq!(acceptance_probability(0.0, -5.0, 100.0), 1.0);
        assert_eq!(acceptance_probability(-3.0, -5.0, 100.0), 1.0);
    }

    #[test]
    fn worse_moves_accept_with_decreasing_probability() {
        let mut prev = 1.0;
        for k in 1..200 {
            let p = acceptance_probability(k as f64 * 0.5, -5.0, 50.0);
            assert!((0.0..1.0).contains(&p));
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn reflection_stays_inside_and_fixes_interior_points() {
        assert_eq!(reflect(1.25, -5.0, 5.0), 1.25);
        assert_eq!(reflect(5.5, -5.0, 5.0), 4.5);
        assert_eq!(reflect(-5.5, -5.0, 5.0), -4.5);
        for v in [-1e8, -37.3, 12.0, 9e7] {
            let r = reflect(v, -5.0, 5.0);
            assert!((-5.0..=5.0).contains(&r), "reflect({v}) = {r}");
        }
    }

    #[test]
    fn best_is_prefix_minimum() {
        let r = probe(&SAConfig::default(), 9);
        let mut running = f64::INFINITY;
        for (c, b) in r.current.iter().zip(&r.best) {
            running = running.min(*c);
            assert_eq!(*b, running);
        }
    }
}
