//! Command-line driver for the probe-trajectory algorithm-selection
//! workbench.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use probetune::error::Error;
use probetune::pipeline::{
    self, EvalSource, ExperimentConfig, elites_file_name,
};
use probetune::solvers::{SAConfig, SolverId};
use probetune::trajectory::{Modality, Task, TrajectoryKind, TrajectorySource};

#[derive(Parser)]
#[command(
    name = "probetune",
    version,
    about = "Learn discriminating probe trajectories for algorithm selection"
)]
struct Cli {
    /// Experiment configuration file (JSON); defaults are desk scale.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Use the published experiment budgets (100k truth evaluations,
    /// 5k tuning experiments).
    #[arg(long, global = true)]
    paper_scale: bool,

    /// Worker threads for internal parallelism (0 = default pool).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Classification,
    RegressionCmaes,
    RegressionDe,
    RegressionPso,
}

impl From<TaskArg> for Task {
    fn from(value: TaskArg) -> Task {
        match value {
            TaskArg::Classification => Task::Classification,
            TaskArg::RegressionCmaes => Task::Regression(SolverId::Cmaes),
            TaskArg::RegressionDe => Task::Regression(SolverId::De),
            TaskArg::RegressionPso => Task::Regression(SolverId::Pso),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Current,
    Best,
}

impl From<KindArg> for TrajectoryKind {
    fn from(value: KindArg) -> TrajectoryKind {
        match value {
            KindArg::Current => TrajectoryKind::Current,
            KindArg::Best => TrajectoryKind::Best,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModalityArg {
    Raw,
    TsFeatures,
    TsFeaturesSelected,
    Ela,
}

impl From<ModalityArg> for Modality {
    fn from(value: ModalityArg) -> Modality {
        match value {
            ModalityArg::Raw => Modality::Raw,
            ModalityArg::TsFeatures => Modality::TsFeatures,
            ModalityArg::TsFeaturesSelected => Modality::TsFeaturesSelected,
            ModalityArg::Ela => Modality::Ela,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Sa,
    Cmaes,
    De,
    Pso,
    All,
}

#[derive(Args)]
struct SourceOpts {
    /// Trajectory source: the annealing probe or a portfolio solver
    /// (ignored by the ela modality).
    #[arg(long, value_enum)]
    source: Option<SourceArg>,

    /// Probe configuration: "default" or the path of a tuned elites file.
    #[arg(long, default_value = "default")]
    sa_config: String,

    /// Generations for portfolio trajectory sources.
    #[arg(long, default_value_t = 2)]
    generations: u32,
}

impl SourceOpts {
    fn resolve(&self) -> Result<EvalSource, Error> {
        match self.source.unwrap_or(SourceArg::Sa) {
            SourceArg::Sa => Ok(EvalSource::Probe(load_sa_config(&self.sa_config)?)),
            SourceArg::Cmaes => Ok(EvalSource::Portfolio {
                source: TrajectorySource::Solver(SolverId::Cmaes),
                generations: self.generations,
            }),
            SourceArg::De => Ok(EvalSource::Portfolio {
                source: TrajectorySource::Solver(SolverId::De),
                generations: self.generations,
            }),
            SourceArg::Pso => Ok(EvalSource::Portfolio {
                source: TrajectorySource::Solver(SolverId::Pso),
                generations: self.generations,
            }),
            SourceArg::All => Ok(EvalSource::Portfolio {
                source: TrajectorySource::All,
                generations: self.generations,
            }),
        }
    }
}

fn load_sa_config(spec: &str) -> Result<SAConfig, Error> {
    if spec == "default" {
        return Ok(SAConfig::default());
    }
    let text = std::fs::read_to_string(spec)?;
    let file: pipeline::ElitesFile = serde_json::from_str(&text)?;
    let best = file
        .elites
        .first()
        .ok_or_else(|| Error::Consistency(format!("{spec} holds no configurations")))?;
    let config = best.config();
    config.validate()?;
    Ok(config)
}

#[derive(Subcommand)]
enum Command {
    /// List the benchmark function catalog.
    ListFunctions,

    /// Label every suite instance by running the portfolio to the truth
    /// budget.
    GenLabels,

    /// Write per-run trajectory CSVs for a source.
    GenTrajectories {
        #[command(flatten)]
        source: SourceOpts,
        #[arg(long, value_enum, default_value = "current")]
        kind: KindArg,
    },

    /// Tune the probe for a task with iterated racing.
    Tune {
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long, value_enum, default_value = "current")]
        kind: KindArg,
        /// Experiment budget override.
        #[arg(long)]
        budget: Option<u64>,
    },

    /// Evaluate an input pipeline under leave-one-instance-out
    /// cross-validation.
    Evaluate {
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long, value_enum, default_value = "raw")]
        modality: ModalityArg,
        #[command(flatten)]
        source: SourceOpts,
        #[arg(long, value_enum, default_value = "current")]
        kind: KindArg,
        /// Landscape sample budget per dimension (30 or 50).
        #[arg(long, default_value_t = 50)]
        ela_budget: u32,
        /// Repeats override.
        #[arg(long)]
        repeats: Option<u32>,
    },

    /// Evaluate a target task with the configuration tuned for another.
    Transfer {
        #[arg(long, value_enum)]
        source_task: TaskArg,
        #[arg(long, value_enum, default_value = "current")]
        source_kind: KindArg,
        #[arg(long, value_enum)]
        target_task: TaskArg,
        #[arg(long, value_enum, default_value = "current")]
        target_kind: KindArg,
    },

    /// Summarize every metrics file in the archive.
    Report,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if cli.paper_scale {
        config.apply_paper_scale();
    }
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    if cli.jobs > 0 {
        config.jobs = cli.jobs;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut config = load_config(&cli)?;

    match cli.command {
        Command::ListFunctions => {
            println!("{:<4} {:<22} {:<22} rotated", "id", "name", "group");
            for (id, name, group, rotated) in pipeline::list_functions() {
                println!("{id:<4} {name:<22} {group:<22} {rotated}");
            }
        }
        Command::GenLabels => {
            let file = pipeline::cmd_gen_labels(&config)?;
            println!(
                "labeled {} instances (truth budget {} x {} runs)",
                file.labels.len(),
                file.truth_budget,
                file.runs
            );
            println!("class distribution:");
            for (solver, count) in &file.class_distribution {
                println!("  {solver:<6} {count}");
            }
        }
        Command::GenTrajectories { source, kind } => {
            let eval_source = source.resolve()?;
            let set = pipeline::cmd_gen_trajectories(&config, &eval_source, kind.into())?;
            println!(
                "wrote {} trajectory files of length {} under {}/{}",
                set.files,
                set.series_length,
                config.out_dir.display(),
                set.directory
            );
        }
        Command::Tune { task, kind, budget } => {
            if let Some(b) = budget {
                config.tuning_budget = b;
            }
            let task: Task = task.into();
            let kind: TrajectoryKind = kind.into();
            let file = pipeline::cmd_tune(&config, task, kind)?;
            println!(
                "tuned {} ({} experiments over {} iterations); elites:",
                file.task, file.experiments_used, file.iterations
            );
            println!("{:<5} {:>9} {:>12} {:>7} {:>11} {:>12}", "rank", "n_samples", "T", "visit", "acceptance", "mean_cost");
            for e in &file.elites {
                println!(
                    "{:<5} {:>9} {:>12.2} {:>7.3} {:>11.2} {:>12.6}",
                    e.rank, e.n_samples, e.initial_temp, e.visit, e.acceptance, e.mean_cost
                );
            }
            println!("written to {}", elites_file_name(task, kind));
        }
        Command::Evaluate { task, modality, source, kind, ela_budget, repeats } => {
            if let Some(r) = repeats {
                config.repeats = r;
            }
            if !matches!(ela_budget, 30 | 50) {
                return Err(Error::Usage("--ela-budget must be 30 or 50 (points per dimension)".into()));
            }
            if matches!(modality, ModalityArg::Ela) && source.source.is_some() {
                return Err(Error::Usage(
                    "the ela modality computes features from samples; it takes no trajectory source"
                        .into(),
                ));
            }
            let eval_source = source.resolve()?;
            let summary = pipeline::cmd_evaluate(
                &config,
                task.into(),
                modality.into(),
                &eval_source,
                kind.into(),
                ela_budget,
            )?;
            print_summary(&summary);
        }
        Command::Transfer { source_task, source_kind, target_task, target_kind } => {
            let summary = pipeline::cmd_transfer(
                &config,
                source_task.into(),
                source_kind.into(),
                target_task.into(),
                target_kind.into(),
            )?;
            print_summary(&summary);
        }
        Command::Report => {
            let (_rows, table) = pipeline::cmd_report(&config)?;
            print!("{table}");
            println!("written to report.csv / report.txt");
        }
    }
    Ok(())
}

fn print_summary(summary: &pipeline::EvaluationSummary) {
    println!("{}: {} per repeat (median / mean over folds)", summary.name, summary.metric_name);
    for r in &summary.repeats {
        println!("  repeat {}: {:.6} / {:.6}", r.repeat, r.metrics.median, r.metrics.mean);
    }
    println!(
        "median over repeats: {:.6}; written to {}",
        summary.median_of_medians(),
        summary.csv_path
    );
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
