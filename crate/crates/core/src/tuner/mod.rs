//! Iterated-racing configurator over the probe's parameter space.
//!
//! Candidates are raced in lockstep over a fixed list of seeded evaluation
//! units; after five units a Friedman test eliminates candidates whose mean
//! rank is significantly worse than the best. Sampling starts uniform and
//! contracts around surviving elites, the spread shrinking every iteration.
//! One experiment is one `(configuration, unit)` cost measurement and costs
//! are deterministic per pair, so repeated measurements are served from a
//! cache without spending budget.

mod objective;
pub(crate) mod stats;

pub use objective::{TaskObjective, objective_cost};

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed;
use crate::solvers::SolverId;
use crate::solvers::gsa::{SAConfig, bounds};
use crate::trajectory::{Task, TrajectoryKind};

/// Candidates per iteration: `max(4, budget / (6 * units))`.
const CANDIDATE_BUDGET_DIVISOR: u64 = 6;
/// Fraction the sampling spread keeps per iteration.
const SPREAD_DECAY: f64 = 0.85;
/// Elimination test level.
pub const RACE_ALPHA: f64 = 0.05;
/// Elites retained between iterations and returned at the end.
pub const ELITE_COUNT: usize = 4;
/// Units every candidate must see before elimination starts.
const MIN_UNITS_BEFORE_TEST: usize = 5;

/// Tunable parameter descriptions with their bounds.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ParamSpace {
    pub n_samples: (u32, u32),
    pub initial_temp: (f64, f64),
    pub visit: (f64, f64),
    pub acceptance: (f64, f64),
}

impl Default for ParamSpace {
    fn default() -> Self {
        ParamSpace {
            n_samples: bounds::N_SAMPLES,
            initial_temp: bounds::INITIAL_TEMP,
            visit: bounds::VISIT,
            acceptance: bounds::ACCEPTANCE,
        }
    }
}

impl ParamSpace {
    pub fn contains(&self, config: &SAConfig) -> bool {
        (self.n_samples.0..=self.n_samples.1).contains(&config.n_samples)
            && (self.initial_temp.0..=self.initial_temp.1).contains(&config.initial_temp)
            && (self.visit.0..=self.visit.1).contains(&config.visit)
            && (self.acceptance.0..=self.acceptance.1).contains(&config.acceptance)
    }
}

/// One of the eight tuning tasks plus its evaluation settings.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TuneTask {
    pub objective: Task,
    pub kind: TrajectoryKind,
    pub functions: Vec<u32>,
    pub instances: Vec<u32>,
    pub dim: usize,
    /// Probe runs per instance when building the dataset.
    pub runs: u32,
    /// Evaluation units per race; each unit is one held-out fold.
    pub units_per_race: u32,
}

impl TuneTask {
    /// All eight objective/kind combinations over the same suite settings.
    pub fn eight_tasks(functions: Vec<u32>, instances: Vec<u32>, dim: usize) -> Vec<TuneTask> {
        let mut tasks = Vec::with_capacity(8);
        for kind in [TrajectoryKind::Current, TrajectoryKind::Best] {
            for objective in [
                Task::Classification,
                Task::Regression(SolverId::Cmaes),
                Task::Regression(SolverId::De),
                Task::Regression(SolverId::Pso),
            ] {
                tasks.push(TuneTask {
                    objective,
                    kind,
                    functions: functions.clone(),
                    instances: instances.clone(),
                    dim,
                    runs: 5,
                    units_per_race: 5,
                });
            }
        }
        tasks
    }

    pub fn name(&self) -> String {
        format!("{}-{}", self.objective.name(), self.kind.name())
    }
}

/// One seeded cost measurement opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalUnit {
    pub index: u32,
    pub seed: u64,
}

/// The cost landscape the configurator searches; deterministic per
/// `(config, unit)`.
pub trait CostObjective: Sync {
    fn cost(&self, config: &SAConfig, unit: &EvalUnit) -> Result<f64>;
}

impl<F> CostObjective for F
where
    F: Fn(&SAConfig, &EvalUnit) -> Result<f64> + Sync,
{
    fn cost(&self, config: &SAConfig, unit: &EvalUnit) -> Result<f64> {
        self(config, unit)
    }
}

/// A configuration with its measured cost history.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Elite {
    pub config: SAConfig,
    pub costs: Vec<f64>,
    pub mean_cost: f64,
}

/// Per-parameter sampling spread.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ParamSpread {
    pub n_samples: f64,
    pub initial_temp: f64,
    pub visit: f64,
    pub acceptance: f64,
}

impl ParamSpread {
    fn initial(space: &ParamSpace) -> Self {
        ParamSpread {
            n_samples: (space.n_samples.1 - space.n_samples.0) as f64 / 4.0,
            initial_temp: (space.initial_temp.1 - space.initial_temp.0) / 4.0,
            visit: (space.visit.1 - space.visit.0) / 4.0,
            acceptance: (space.acceptance.1 - space.acceptance.0) / 4.0,
        }
    }

    fn decay(&mut self) {
        self.n_samples *= SPREAD_DECAY;
        self.initial_temp *= SPREAD_DECAY;
        self.visit *= SPREAD_DECAY;
        self.acceptance *= SPREAD_DECAY;
    }
}

/// Configurator state between race iterations.
#[derive(Debug, Clone)]
pub struct RaceState {
    pub space: ParamSpace,
    pub iteration: u32,
    pub elites: Vec<Elite>,
    pub spread: ParamSpread,
    pub budget_remaining: u64,
}

impl RaceState {
    pub fn new(space: ParamSpace, budget: u64) -> Self {
        let spread = ParamSpread::initial(&space);
        RaceState { space, iteration: 1, elites: Vec::new(), spread, budget_remaining: budget }
    }
}

/// One budget unit spent: a configuration measured on a unit.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ExperimentRecord {
    pub iteration: u32,
    pub config: SAConfig,
    pub unit_seed: u64,
    pub cost: f64,
}

fn truncated_normal(
    rng: &mut impl Rng,
    mean: f64,
    spread: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    if spread <= 0.0 {
        return mean.clamp(lo, hi);
    }
    for _ in 0..100 {
        let v = mean + spread * rng.sample::<f64, _>(StandardNormal);
        if (lo..=hi).contains(&v) {
            return v;
        }
    }
    (mean + spread * rng.sample::<f64, _>(StandardNormal)).clamp(lo, hi)
}

/// Draw `k` candidate configurations: uniform on the first iteration,
/// truncated-normal around a randomly chosen elite afterwards.
pub fn sample_candidates(state: &RaceState, k: usize, sample_seed: u64) -> Result<Vec<SAConfig>> {
    if k < 2 {
        return Err(Error::domain("candidate batch must have at least 2 members"));
    }
    let space = &state.space;
    let mut rng = seed::rng_from(sample_seed);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let config = if state.iteration <= 1 || state.elites.is_empty() {
            SAConfig {
                n_samples: rng.random_range(space.n_samples.0..=space.n_samples.1),
                initial_temp: rng.random_range(space.initial_temp.0..=space.initial_temp.1),
                visit: rng.random_range(space.visit.0..=space.visit.1),
                acceptance: rng.random_range(space.acceptance.0..=space.acceptance.1),
            }
        } else {
            let elite = &state.elites[rng.random_range(0..state.elites.len())].config;
            let n = truncated_normal(
                &mut rng,
                elite.n_samples as f64,
                state.spread.n_samples,
                space.n_samples.0 as f64,
                space.n_samples.1 as f64,
            );
            SAConfig {
                n_samples: (n.round() as u32).clamp(space.n_samples.0, space.n_samples.1),
                initial_temp: truncated_normal(
                    &mut rng,
                    elite.initial_temp,
                    state.spread.initial_temp,
                    space.initial_temp.0,
                    space.initial_temp.1,
                ),
                visit: truncated_normal(
                    &mut rng,
                    elite.visit,
                    state.spread.visit,
                    space.visit.0,
                    space.visit.1,
                ),
                acceptance: truncated_normal(
                    &mut rng,
                    elite.acceptance,
                    state.spread.acceptance,
                    space.acceptance.0,
                    space.acceptance.1,
                ),
            }
        };
        debug_assert!(space.contains(&config));
        out.push(config);
    }
    Ok(out)
}

type ConfigKey = (u32, u64, u64, u64);

fn config_key(config: &SAConfig) -> ConfigKey {
    (
        config.n_samples,
        config.initial_temp.to_bits(),
        config.visit.to_bits(),
        config.acceptance.to_bits(),
    )
}

struct RaceRun<'a> {
    objective: &'a dyn CostObjective,
    alpha: f64,
    min_survivors: usize,
    cache: HashMap<(ConfigKey, u32), f64>,
    audit: Vec<ExperimentRecord>,
    experiments_used: u64,
}

struct RaceOutcome {
    /// Surviving candidate indices with their cost vectors.
    survivors: Vec<(usize, Vec<f64>)>,
}

impl RaceRun<'_> {
    /// Evaluate candidates in lockstep over the units, eliminating after
    /// each unit once enough evidence accumulated. `budget` limits fresh
    /// (non-cached) measurements.
    fn race(
        &mut self,
        candidates: &[SAConfig],
        units: &[EvalUnit],
        iteration: u32,
        budget: &mut u64,
    ) -> Result<RaceOutcome> {
        if candidates.len() < 2 {
            return Err(Error::domain("a race needs at least 2 candidates"));
        }
        if units.len() < MIN_UNITS_BEFORE_TEST {
            return Err(Error::Protocol(format!(
                "evaluation stream yields {} units; the race needs at least {MIN_UNITS_BEFORE_TEST}",
                units.len()
            )));
        }

        let mut alive: Vec<usize> = (0..candidates.len()).collect();
        let mut costs: Vec<Vec<f64>> = vec![Vec::new(); candidates.len()];
        let mut units_run = 0usize;

        for unit in units {
            let fresh: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&c| !self.cache.contains_key(&(config_key(&candidates[c]), unit.index)))
                .collect();
            if (fresh.len() as u64) > *budget {
                break;
            }
            let fresh_costs: Vec<(usize, Result<f64>)> = fresh
                .par_iter()
                .map(|&c| (c, self.objective.cost(&candidates[c], unit)))
                .collect();
            for (c, result) in fresh_costs {
                let value = result?;
                self.cache.insert((config_key(&candidates[c]), unit.index), value);
                self.audit.push(ExperimentRecord {
                    iteration,
                    config: candidates[c],
                    unit_seed: unit.seed,
                    cost: value,
                });
            }
            *budget -= fresh.len() as u64;
            self.experiments_used += fresh.len() as u64;
            for &c in &alive {
                let value = self.cache[&(config_key(&candidates[c]), unit.index)];
                costs[c].push(value);
            }
            units_run += 1;

            // Elimination needs evidence; the stop-at-min-survivors rule
            // only applies once testing has begun.
            if units_run >= MIN_UNITS_BEFORE_TEST {
                if alive.len() > self.min_survivors {
                    self.eliminate(&mut alive, &costs);
                }
                if alive.len() <= self.min_survivors {
                    break;
                }
            }
        }

        Ok(RaceOutcome {
            survivors: alive.into_iter().map(|c| (c, costs[c].clone())).collect(),
        })
    }

    /// Drop candidates whose rank sum is significantly worse than the best;
    /// the `min_survivors` best ranks are protected.
    fn eliminate(&self, alive: &mut Vec<usize>, costs: &[Vec<f64>]) {
        let units_run = costs[alive[0]].len();
        let matrix: Vec<Vec<f64>> = (0..units_run)
            .map(|u| alive.iter().map(|&c| costs[c][u]).collect())
            .collect();
        let outcome = stats::friedman(&matrix, self.alpha);
        log::trace!(
            "race test over {units_run} units: statistic {:.3}, p {:.4}",
            outcome.statistic,
            outcome.p_value
        );
        if outcome.degenerate || outcome.p_value >= self.alpha {
            return;
        }
        let best_rank =
            outcome.rank_sums.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut by_rank: Vec<usize> = (0..alive.len()).collect();
        by_rank.sort_by(|&a, &b| {
            outcome.rank_sums[a].total_cmp(&outcome.rank_sums[b]).then(a.cmp(&b))
        });
        let protected: Vec<usize> = by_rank[..self.min_survivors.min(by_rank.len())].to_vec();
        let keep: Vec<usize> = (0..alive.len())
            .filter(|&i| {
                protected.contains(&i)
                    || outcome.rank_sums[i] - best_rank <= outcome.critical_difference
            })
            .map(|i| alive[i])
            .collect();
        *alive = keep;
    }
}

/// Race a candidate set over seeded units with an unlimited experiment
/// budget. Returns the survivors with their cost histories.
pub fn race(
    candidates: &[SAConfig],
    units: &[EvalUnit],
    objective: &dyn CostObjective,
    alpha: f64,
    min_survivors: usize,
) -> Result<Vec<Elite>> {
    let mut run = RaceRun {
        objective,
        alpha,
        min_survivors,
        cache: HashMap::new(),
        audit: Vec::new(),
        experiments_used: 0,
    };
    let mut unlimited = u64::MAX;
    let outcome = run.race(candidates, units, 1, &mut unlimited)?;
    Ok(outcome
        .survivors
        .into_iter()
        .map(|(c, costs)| {
            let mean_cost = costs.iter().sum::<f64>() / costs.len() as f64;
            Elite { config: candidates[c], costs, mean_cost }
        })
        .collect())
}

/// Full tuning outcome: ranked elites plus the audit trail.
#[derive(Debug, Clone)]
pub struct TuneOutcome {
    /// Up to four surviving configurations, best mean cost first.
    pub elites: Vec<Elite>,
    pub audit: Vec<ExperimentRecord>,
    pub iterations: u32,
    pub experiments_used: u64,
    /// Mean elite cost after each iteration; non-increasing by construction.
    pub elite_mean_log: Vec<f64>,
}

/// Iterated racing against an arbitrary cost objective.
pub fn tune_with(
    objective: &dyn CostObjective,
    units_per_race: u32,
    budget: u64,
    tune_seed: u64,
    space: ParamSpace,
) -> Result<TuneOutcome> {
    if budget < 50 {
        return Err(Error::domain(format!("tuning budget must be >= 50, got {budget}")));
    }
    if (units_per_race as usize) < MIN_UNITS_BEFORE_TEST {
        return Err(Error::domain(format!(
            "units per race must be >= {MIN_UNITS_BEFORE_TEST}"
        )));
    }

    let units: Vec<EvalUnit> = (0..units_per_race)
        .map(|j| EvalUnit { index: j, seed: seed::derive(tune_seed, "tuner.unit", &[j as u64]) })
        .collect();
    let candidates_per_iteration = 4.max(
        (budget / (CANDIDATE_BUDGET_DIVISOR * units_per_race as u64)) as usize,
    );

    let mut state = RaceState::new(space, budget);
    let mut run = RaceRun {
        objective,
        alpha: RACE_ALPHA,
        min_survivors: ELITE_COUNT,
        cache: HashMap::new(),
        audit: Vec::new(),
        experiments_used: 0,
    };
    let mut elite_mean_log = Vec::new();

    loop {
        let fresh_count = 2.max(candidates_per_iteration.saturating_sub(state.elites.len()));
        // A new candidate must at least reach the first elimination test.
        if state.budget_remaining < (fresh_count * MIN_UNITS_BEFORE_TEST) as u64 {
            break;
        }

        let sample_seed = seed::derive(tune_seed, "tuner.sample", &[state.iteration as u64]);
        let mut candidates: Vec<SAConfig> = state.elites.iter().map(|e| e.config).collect();
        candidates.extend(sample_candidates(&state, fresh_count, sample_seed)?);

        let outcome =
            run.race(&candidates, &units, state.iteration, &mut state.budget_remaining)?;

        // Elite replacement considers fully raced candidates plus the old
        // elites (their measurements are cached, hence free and complete).
        // Survivors of a race that stopped early get their missing units
        // topped up, budget permitting.
        let mut pool: Vec<Elite> = Vec::new();
        let mut seen: Vec<ConfigKey> = Vec::new();
        let full = units.len();
        for (c, costs) in &outcome.survivors {
            let mut costs = costs.clone();
            while costs.len() < full && state.budget_remaining > 0 {
                let unit = &units[costs.len()];
                let key = (config_key(&candidates[*c]), unit.index);
                let value = match run.cache.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = run.objective.cost(&candidates[*c], unit)?;
                        run.cache.insert(key, v);
                        run.audit.push(ExperimentRecord {
                            iteration: state.iteration,
                            config: candidates[*c],
                            unit_seed: unit.seed,
                            cost: v,
                        });
                        run.experiments_used += 1;
                        state.budget_remaining -= 1;
                        v
                    }
                };
                costs.push(value);
            }
            if costs.len() == full && !seen.contains(&config_key(&candidates[*c])) {
                seen.push(config_key(&candidates[*c]));
                let mean_cost = costs.iter().sum::<f64>() / costs.len() as f64;
                pool.push(Elite { config: candidates[*c], costs, mean_cost });
            }
        }
        for elite in &state.elites {
            if !seen.contains(&config_key(&elite.config)) {
                seen.push(config_key(&elite.config));
                pool.push(elite.clone());
            }
        }
        pool.sort_by(|a, b| a.mean_cost.total_cmp(&b.mean_cost));
        pool.truncate(ELITE_COUNT);
        if !pool.is_empty() {
            state.elites = pool;
            let mean = state.elites.iter().map(|e| e.mean_cost).sum::<f64>()
                / state.elites.len() as f64;
            elite_mean_log.push(mean);
        }

        state.iteration += 1;
        state.spread.decay();
    }

    if state.elites.is_empty() {
        return Err(Error::Protocol("tuning budget exhausted before any race completed".into()));
    }
    Ok(TuneOutcome {
        elites: state.elites,
        audit: run.audit,
        iterations: state.iteration - 1,
        experiments_used: run.experiments_used,
        elite_mean_log,
    })
}

/// Tune the probe for a task: builds the task objective over the given
/// ground-truth labels and runs iterated racing.
pub fn tune(
    task: &TuneTask,
    labels: &[crate::solvers::PortfolioLabel],
    budget: u64,
    tune_seed: u64,
) -> Result<TuneOutcome> {
    let objective = TaskObjective { task, labels };
    tune_with(&objective, task.units_per_race, budget, tune_seed, ParamSpace::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units(n: u32) -> Vec<EvalUnit> {
        (0..n).map(|j| EvalUnit { index: j, seed: j as u64 }).collect()
    }

    /// Planted-optimum synthetic cost, identical on every unit.
    fn planted_cost(config: &SAConfig, _unit: &EvalUnit) -> Result<f64> {
        Ok((config.n_samples as f64 - 50.0).abs() / 100.0 + (config.visit - 2.0).abs())
    }

    fn any_config(n_samples: u32, visit: f64) -> SAConfig {
        SAConfig { n_samples, initial_temp: 100.0, visit, acceptance: -100.0 }
    }

    #[test]
    fn first_iteration_samples_uniform_within_bounds() {
        let state = RaceState::new(ParamSpace::default(), 1000);
        let configs = sample_candidates(&state, 10, 3).unwrap();
        assert_eq!(configs.len(), 10);
        for c in &configs {
            assert!(state.space.contains(c));
        }
        assert_eq!(configs, sample_candidates(&state, 10, 3).unwrap());
        assert_ne!(configs, sample_candidates(&state, 10, 4).unwrap());
    }

    #[test]
    fn zero_spread_reproduces_the_elite() {
        let mut state = RaceState::new(ParamSpace::default(), 1000);
        state.iteration = 3;
        state.elites = vec![Elite {
            config: any_config(42, 1.9),
            costs: vec![0.0],
            mean_cost: 0.0,
        }];
        state.spread =
            ParamSpread { n_samples: 0.0, initial_temp: 0.0, visit: 0.0, acceptance: 0.0 };
        for c in sample_candidates(&state, 5, 9).unwrap() {
            assert_eq!(c.n_samples, 42);
            assert_eq!(c.visit, 1.9);
        }
    }

    #[test]
    fn candidate_batch_of_one_is_a_domain_error() {
        let state = RaceState::new(ParamSpace::default(), 1000);
        assert!(sample_candidates(&state, 1, 3).is_err());
    }

    #[test]
    fn dominant_candidate_survives_every_race() {
        let candidates = vec![
            any_config(50, 2.0), // planted optimum: cost 0
            any_config(90, 2.5),
            any_config(10, 1.5),
            any_config(70, 2.4),
            any_config(30, 1.6),
            any_config(95, 1.5),
        ];
        for trial in 0..5u32 {
            let survivors =
                race(&candidates, &units(20 + trial), &planted_cost, 0.05, 1).unwrap();
            assert!(
                survivors.iter().any(|e| e.config.n_samples == 50),
                "dominant candidate eliminated in trial {trial}"
            );
            let best = survivors.iter().map(|e| e.mean_cost).fold(f64::INFINITY, f64::min);
            assert_eq!(best, 0.0);
        }
    }

    #[test]
    fn identical_candidates_both_survive() {
        let candidates = vec![any_config(50, 2.0), any_config(50, 2.0)];
        let survivors = race(&candidates, &units(10), &planted_cost, 0.05, 1).unwrap();
        assert_eq!(survivors.len(), 2);
    }

    #[test]
    fn single_candidate_is_a_domain_error() {
        let candidates = vec![any_config(50, 2.0)];
        assert!(race(&candidates, &units(10), &planted_cost, 0.05, 1).is_err());
    }

    #[test]
    fn short_stream_is_a_protocol_error() {
        let candidates = vec![any_config(50, 2.0), any_config(60, 2.2)];
        assert!(matches!(
            race(&candidates, &units(4), &planted_cost, 0.05, 1),
            Err(Error::Protocol(_))
        ));
    }

    #[test]
    fn tune_recovers_the_planted_optimum() {
        let outcome =
            tune_with(&planted_cost, 5, 300, 11, ParamSpace::default()).unwrap();
        let best = &outcome.elites[0];
        assert!(
            (best.config.n_samples as i64 - 50).abs() <= 10,
            "n_samples {} far from 50",
            best.config.n_samples
        );
        assert!(
            (best.config.visit - 2.0).abs() <= 0.2,
            "visit {} far from 2.0",
            best.config.visit
        );
    }

    #[test]
    fn tune_respects_budget_and_bounds() {
        let outcome = tune_with(&planted_cost, 5, 120, 3, ParamSpace::default()).unwrap();
        assert!(outcome.experiments_used <= 120);
        assert_eq!(outcome.audit.len() as u64, outcome.experiments_used);
        assert!(outcome.elites.len() <= ELITE_COUNT);
        let space = ParamSpace::default();
        for e in &outcome.elites {
            assert!(space.contains(&e.config));
        }
    }

    #[test]
    fn elite_mean_cost_is_non_increasing() {
        let outcome = tune_with(&planted_cost, 6, 400, 5, ParamSpace::default()).unwrap();
        for pair in outcome.elite_mean_log.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "elite mean rose: {:?}",
                outcome.elite_mean_log
            );
        }
    }

    #[test]
    fn zero_budget_is_a_domain_error() {
        assert!(tune_with(&planted_cost, 5, 0, 1, ParamSpace::default()).is_err());
    }

    #[test]
    fn full_scale_budget_runs_within_its_allowance() {
        let outcome = tune_with(&planted_cost, 5, 5000, 2, ParamSpace::default()).unwrap();
        assert!(outcome.experiments_used <= 5000);
        assert!(outcome.elites.len() <= ELITE_COUNT);
        assert!((outcome.elites[0].config.n_samples as i64 - 50).abs() <= 5);
    }

    #[test]
    fn the_eight_tasks_enumerate_every_objective_kind_pair() {
        let tasks = TuneTask::eight_tasks(vec![1, 2], vec![1, 2, 3], 10);
        assert_eq!(tasks.len(), 8);
        let mut names: Vec<String> = tasks.iter().map(|t| t.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 8, "task names must be distinct");
        assert!(names.contains(&"classification-current".to_string()));
        assert!(names.contains(&"regression-pso-best".to_string()));
    }
}
