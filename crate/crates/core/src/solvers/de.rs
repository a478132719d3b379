//! DE/rand/1/bin differential evolution.
//!
//! Generation 1 evaluates the initial population, so a run of `g`
//! generations costs exactly `population * g` evaluations.

use rand::Rng;

use crate::bench::{DOMAIN, EvalBudget, ProblemInstance};
use crate::error::{Error, Result};
use crate::seed;
use crate::solvers::{RunResult, SolverParams, TrajectoryLog};

pub fn run_de(
    instance: &ProblemInstance,
    params: &SolverParams,
    generations: usize,
    run_seed: u64,
    budget: &mut EvalBudget,
) -> Result<RunResult> {
    if generations < 1 {
        return Err(Error::domain("generations must be >= 1"));
    }
    let np = params.population;
    if np < 4 {
        return Err(Error::domain("DE/rand/1 needs a population of at least 4"));
    }
    budget.ensure(np as u64 * generations as u64)?;

    let dim = instance.dim;
    let scale = params.constant("scale_factor", 0.5);
    let crossover = params.constant("crossover_rate", 0.9);
    let mut rng = seed::rng_from(run_seed);
    let mut log = TrajectoryLog::with_capacity(np * generations);

    let mut population: Vec<Vec<f64>> = Vec::with_capacity(np);
    let mut fitness: Vec<f64> = Vec::with_capacity(np);
    for _ in 0..np {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(DOMAIN.0..DOMAIN.1)).collect();
        let f = instance.evaluate(&x, budget)?;
        log.push(f);
        population.push(x);
        fitness.push(f);
    }

    for _ in 1..generations {
        for i in 0..np {
            let (r1, r2, r3) = distinct_triplet(&mut rng, np, i);
            let j_rand = rng.random_range(0..dim);
            let mut trial = Vec::with_capacity(dim);
            for j in 0..dim {
                let mutated = population[r1][j]
                    + scale * (population[r2][j] - population[r3][j]);
                let take_mutant = rng.random::<f64>() < crossover || j == j_rand;
                let v = if take_mutant { mutated } else { population[i][j] };
                trial.push(v.clamp(DOMAIN.0, DOMAIN.1));
            }
            let trial_fitness = instance.evaluate(&trial, budget)?;
            log.push(trial_fitness);
            if trial_fitness <= fitness[i] {
                population[i] = trial;
                fitness[i] = trial_fitness;
            }
        }
    }

    Ok(log.finish(run_seed))
}

fn distinct_triplet(rng: &mut impl Rng, np: usize, exclude: usize) -> (usize, usize, usize) {
    let mut pick = |taken: &[usize]| loop {
        let c = rng.random_range(0..np);
        if c != exclude && !taken.contains(&c) {
            return c;
        }
    };
    let r1 = pick(&[]);
    let r2 = pick(&[r1]);
    let r3 = pick(&[r1, r2]);
    (r1, r2, r3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::make_instance;
    use crate::solvers::SolverId;

    fn run(generations: usize, run_seed: u64) -> RunResult {
        let inst = make_instance(1, 1, 10).unwrap();
        let params = SolverParams::defaults(SolverId::De);
        let mut budget = EvalBudget::new(100_000).unwrap();
        run_de(&inst, &params, generations, run_seed, &mut budget).unwrap()
    }

    #[test]
    fn trajectory_length_is_population_times_generations() {
        assert_eq!(run(2, 1).current.len(), 60);
        assert_eq!(run(7, 1).current.len(), 210);
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(run(4, 9), run(4, 9));
    }

    #[test]
    fn improves_on_a_convex_function() {
        let r = run(60, 2);
        assert!(r.final_best < r.current[0]);
    }
}
