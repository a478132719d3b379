//! Global-best particle swarm with constriction-style defaults, velocity
//! clamping at half the domain width, and synchronous best updates.

use rand::Rng;

use crate::bench::{DOMAIN, EvalBudget, ProblemInstance};
use crate::error::{Error, Result};
use crate::seed;
use crate::solvers::{RunResult, SolverParams, TrajectoryLog};

pub fn run_pso(
    instance: &ProblemInstance,
    params: &SolverParams,
    generations: usize,
    run_seed: u64,
    budget: &mut EvalBudget,
) -> Result<RunResult> {
    if generations < 1 {
        return Err(Error::domain("generations must be >= 1"));
    }
    let swarm_size = params.population;
    budget.ensure(swarm_size as u64 * generations as u64)?;

    let dim = instance.dim;
    let inertia = params.constant("inertia", 0.7298);
    let cognitive = params.constant("cognitive", 1.49618);
    let social = params.constant("social", 1.49618);
    let v_max = (DOMAIN.1 - DOMAIN.0) / 2.0;
    let mut rng = seed::rng_from(run_seed);
    let mut log = TrajectoryLog::with_capacity(swarm_size * generations);

    let mut positions: Vec<Vec<f64>> = Vec::with_capacity(swarm_size);
    let mut velocities: Vec<Vec<f64>> = Vec::with_capacity(swarm_size);
    let mut personal_best: Vec<Vec<f64>> = Vec::with_capacity(swarm_size);
    let mut personal_best_fitness: Vec<f64> = Vec::with_capacity(swarm_size);
    for _ in 0..swarm_size {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(DOMAIN.0..DOMAIN.1)).collect();
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-v_max..v_max)).collect();
        let f = instance.evaluate(&x, budget)?;
        log.push(f);
        personal_best.push(x.clone());
        personal_best_fitness.push(f);
        positions.push(x);
        velocities.push(v);
    }
    let mut global_best = argmin(&personal_best_fitness);

    for _ in 1..generations {
        let leader = personal_best[global_best].clone();
        for i in 0..swarm_size {
            for j in 0..dim {
                let r1 = rng.random::<f64>();
                let r2 = rng.random::<f64>();
                let v = inertia * velocities[i][j]
                    + cognitive * r1 * (personal_best[i][j] - positions[i][j])
                    + social * r2 * (leader[j] - positions[i][j]);
                velocities[i][j] = v.clamp(-v_max, v_max);
                positions[i][j] =
                    (positions[i][j] + velocities[i][j]).clamp(DOMAIN.0, DOMAIN.1);
            }
            let f = instance.evaluate(&positions[i], budget)?;
            log.push(f);
            if f < personal_best_fitness[i] {
                personal_best_fitness[i] = f;
                personal_best[i] = positions[i].clone();
            }
        }
        global_best = argmin(&personal_best_fitness);
    }

    Ok(log.finish(run_seed))
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::make_instance;
    use crate::solvers::SolverId;

    fn run(generations: usize, run_seed: u64) -> RunResult {
        let inst = make_instance(1, 1, 10).unwrap();
        let params = SolverParams::defaults(SolverId::Pso);
        let mut budget = EvalBudget::new(100_000).unwrap();
        run_pso(&inst, &params, generations, run_seed, &mut budget).unwrap()
    }

    #[test]
    fn trajectory_length_is_population_times_generations() {
        assert_eq!(run(2, 1).current.len(), 80);
        assert_eq!(run(7, 1).current.len(), 280);
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(run(4, 21), run(4, 21));
    }

    #[test]
    fn improves_on_a_convex_function() {
        let r = run(40, 5);
        assert!(r.final_best < r.current[0]);
    }
}
