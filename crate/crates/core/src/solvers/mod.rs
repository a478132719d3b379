//! The solver portfolio (CMA-ES, DE, PSO), the tunable simulated-annealing
//! probe, and ground-truth labeling runs.
//!
//! Every run logs the fitness of each evaluation in order (`current`) plus
//! the prefix minimum (`best`), owns its generator state and budget, and is
//! reproducible from `(instance, params, seed)` alone.

mod cmaes;
mod de;
pub mod gsa;
mod pso;

pub use cmaes::run_cmaes;
pub use de::run_de;
pub use gsa::{SAConfig, run_gsa};
pub use pso::run_pso;

use std::collections::BTreeMap;
use std::fmt;

use crate::bench::{EvalBudget, ProblemInstance};
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolverId {
    Cmaes,
    De,
    Pso,
    Sa,
}

impl SolverId {
    /// The ground-truth portfolio, in tie-break order.
    pub const PORTFOLIO: [SolverId; 3] = [SolverId::Cmaes, SolverId::De, SolverId::Pso];

    pub fn name(&self) -> &'static str {
        match self {
            SolverId::Cmaes => "CMAES",
            SolverId::De => "DE",
            SolverId::Pso => "PSO",
            SolverId::Sa => "SA",
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Run parameters for a portfolio solver.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SolverParams {
    pub solver: SolverId,
    /// Population size; unused by the annealing probe.
    pub population: usize,
    /// Named algorithm constants (e.g. DE scale factor, PSO inertia).
    pub constants: BTreeMap<String, f64>,
}

impl SolverParams {
    /// Community-default settings; populations follow the portfolio's
    /// per-generation evaluation budgets at d = 10.
    pub fn defaults(solver: SolverId) -> Self {
        let mut constants = BTreeMap::new();
        let population = match solver {
            SolverId::Cmaes => {
                constants.insert("initial_step".into(), 2.0);
                10
            }
            SolverId::De => {
                constants.insert("scale_factor".into(), 0.5);
                constants.insert("crossover_rate".into(), 0.9);
                30
            }
            SolverId::Pso => {
                constants.insert("inertia".into(), 0.7298);
                constants.insert("cognitive".into(), 1.49618);
                constants.insert("social".into(), 1.49618);
                40
            }
            SolverId::Sa => 1,
        };
        SolverParams { solver, population, constants }
    }

    pub fn constant(&self, name: &str, fallback: f64) -> f64 {
        self.constants.get(name).copied().unwrap_or(fallback)
    }

    fn validate(&self) -> Result<()> {
        if self.population < 1 {
            return Err(Error::domain("population must be >= 1"));
        }
        Ok(())
    }
}

/// A logged solver run: per-evaluation fitness and its prefix minimum.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunResult {
    pub current: Vec<f64>,
    pub best: Vec<f64>,
    pub final_best: f64,
    pub seed: u64,
    pub evals_used: usize,
}

impl RunResult {
    /// CSV body, one row per evaluation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eval_index,current,best\n");
        for (i, (c, b)) in self.current.iter().zip(&self.best).enumerate() {
            out.push_str(&format!("{i},{c},{b}\n"));
        }
        out
    }
}

/// Grows a run trajectory, maintaining the prefix-minimum series.
pub(crate) struct TrajectoryLog {
    current: Vec<f64>,
    best: Vec<f64>,
}

impl TrajectoryLog {
    pub(crate) fn with_capacity(n: usize) -> Self {
        TrajectoryLog { current: Vec::with_capacity(n), best: Vec::with_capacity(n) }
    }

    pub(crate) fn push(&mut self, fitness: f64) {
        let best = match self.best.last() {
            Some(&b) if b < fitness => b,
            _ => fitness,
        };
        self.current.push(fitness);
        self.best.push(best);
    }

    pub(crate) fn finish(self, seed: u64) -> RunResult {
        let final_best = *self.best.last().expect("trajectory never empty at finish");
        let evals_used = self.current.len();
        RunResult { current: self.current, best: self.best, final_best, seed, evals_used }
    }
}

/// Median final target per portfolio solver.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MedianFinals {
    pub cmaes: f64,
    pub de: f64,
    pub pso: f64,
}

impl MedianFinals {
    pub fn get(&self, solver: SolverId) -> f64 {
        match solver {
            SolverId::Cmaes => self.cmaes,
            SolverId::De => self.de,
            SolverId::Pso => self.pso,
            SolverId::Sa => f64::NAN,
        }
    }
}

/// Ground-truth record for one problem instance.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PortfolioLabel {
    pub function_id: u32,
    pub instance_id: u32,
    pub median_final: MedianFinals,
    pub best_solver: SolverId,
}

/// Argmin over the portfolio with ties broken by fixed solver order.
pub fn best_solver_of(medians: &MedianFinals) -> SolverId {
    let mut best = SolverId::PORTFOLIO[0];
    let mut best_value = medians.get(best);
    for &s in &SolverId::PORTFOLIO[1..] {
        let v = medians.get(s);
        if v < best_value {
            best = s;
            best_value = v;
        }
    }
    best
}

/// Run one portfolio solver for a number of generations.
pub fn run_portfolio_solver(
    solver: SolverId,
    instance: &ProblemInstance,
    params: &SolverParams,
    generations: usize,
    run_seed: u64,
    budget: &mut EvalBudget,
) -> Result<RunResult> {
    params.validate()?;
    match solver {
        SolverId::Cmaes => run_cmaes(instance, params, generations, run_seed, budget),
        SolverId::De => run_de(instance, params, generations, run_seed, budget),
        SolverId::Pso => run_pso(instance, params, generations, run_seed, budget),
        SolverId::Sa => Err(Error::domain("the annealing probe is not a portfolio solver")),
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite fitness"));
    let n = values.len();
    if n % 2 == 1 { values[n / 2] } else { 0.5 * (values[n / 2 - 1] + values[n / 2]) }
}

/// Label an instance by running the whole portfolio to the truth budget.
///
/// Each solver runs `runs` times for `truth_budget / population` generations;
/// the label is the solver with the lowest median final best.
pub fn label_portfolio(
    instance: &ProblemInstance,
    runs: u32,
    truth_budget: u64,
    label_seed: u64,
) -> Result<PortfolioLabel> {
    if runs < 1 {
        return Err(Error::domain("runs must be >= 1"));
    }
    let mut medians = [0.0f64; 3];
    for (si, &solver) in SolverId::PORTFOLIO.iter().enumerate() {
        let params = SolverParams::defaults(solver);
        let generations = (truth_budget / params.population as u64) as usize;
        if generations < 1 {
            return Err(Error::Budget {
                used: 0,
                limit: truth_budget,
                requested: params.population as u64,
            });
        }
        let mut finals = Vec::with_capacity(runs as usize);
        for run in 0..runs {
            let run_seed = seed::derive(label_seed, "label.run", &[si as u64, run as u64]);
            let mut budget = EvalBudget::new(params.population as u64 * generations as u64)?;
            let result =
                run_portfolio_solver(solver, instance, &params, generations, run_seed, &mut budget)?;
            finals.push(result.final_best);
        }
        medians[si] = median(&mut finals);
    }
    let median_final = MedianFinals { cmaes: medians[0], de: medians[1], pso: medians[2] };
    Ok(PortfolioLabel {
        function_id: instance.function_id,
        instance_id: instance.instance_id,
        median_final,
        best_solver: best_solver_of(&median_final),
    })
}
