//! Experiment orchestration: configuration, command drivers, and report
//! emission.
//!
//! Every command derives its randomness as `hash(master_seed, tag, counter)`
//! and writes through the archive, so a rerun with the same configuration
//! reproduces every output byte for byte.

mod archive;
pub mod eval;

pub use archive::{Archive, MANIFEST_FILE, Manifest, sha256_hex};

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::bench::{self, EvalBudget, make_instance};
use crate::error::{Error, Result};
use crate::features::ela_features;
use crate::models::Metrics;
use crate::seed;
use crate::solvers::{
    PortfolioLabel, SAConfig, SolverId, SolverParams, label_portfolio, run_gsa,
    run_portfolio_solver,
};
use crate::trajectory::{
    ElaSample, LabeledDataset, Modality, Task, TrajectoryKind, TrajectorySource,
    assemble_dataset, assemble_ela_dataset,
};
use crate::tuner::{self, TuneTask};

pub const LABELS_FILE: &str = "labels.json";

/// Vectors sampled per instance for the sampled-landscape modality.
pub const ELA_VECTORS_PER_INSTANCE: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SuiteConfig {
    pub function_ids: Vec<u32>,
    pub instance_ids: Vec<u32>,
    pub dim: usize,
}

/// Aggregated experiment settings. Defaults are desk scale; paper-scale
/// budgets are opt-in.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExperimentConfig {
    pub suite: SuiteConfig,
    /// Solver/probe runs per instance.
    pub runs: u32,
    /// Portfolio trajectory lengths to study, in generations.
    pub generations: Vec<u32>,
    /// Evaluations per run when labeling ground truth.
    pub truth_budget: u64,
    /// Experiments available to the configurator.
    pub tuning_budget: u64,
    /// Repeated evaluations per command.
    pub repeats: u32,
    pub master_seed: u64,
    #[serde(default)]
    pub out_dir: PathBuf,
    /// Worker threads for internal parallelism; 0 uses the default pool.
    #[serde(default)]
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: SuiteConfig {
                function_ids: bench::CATALOG.iter().map(|f| f.id).collect(),
                instance_ids: (1..=5).collect(),
                dim: 10,
            },
            runs: 5,
            generations: vec![2, 7],
            truth_budget: 10_000,
            tuning_budget: 500,
            repeats: 5,
            master_seed: 1,
            out_dir: PathBuf::from("probetune_out"),
            jobs: 0,
        }
    }
}

impl ExperimentConfig {
    /// Raise the budget knobs to the published experiment scale.
    pub fn apply_paper_scale(&mut self) {
        self.truth_budget = 100_000;
        self.tuning_budget = 5_000;
    }

    pub fn validate(&self) -> Result<()> {
        for &f in &self.suite.function_ids {
            if bench::functions::spec(f).is_none() {
                return Err(Error::Catalog(f));
            }
        }
        if self.suite.instance_ids.is_empty() || self.suite.function_ids.is_empty() {
            return Err(Error::Usage("suite must name at least one function and instance".into()));
        }
        if self.suite.instance_ids.iter().any(|&i| i < 1) {
            return Err(Error::Usage("instance ids start at 1".into()));
        }
        if self.suite.dim < 2 {
            return Err(Error::Usage("dimension must be >= 2".into()));
        }
        if self.runs < 1 || self.repeats < 1 {
            return Err(Error::Usage("runs and repeats must be >= 1".into()));
        }
        Ok(())
    }

    /// Hash of the settings every archive file implicitly assumes: the
    /// suite, the ground-truth budget, and the master seed. Per-command
    /// knobs (tuning budget, repeats) and execution details (paths, worker
    /// counts) stay out, since each output file carries those itself.
    pub fn config_hash(&self) -> String {
        #[derive(serde::Serialize)]
        struct Canonical<'a> {
            suite: &'a SuiteConfig,
            runs: u32,
            truth_budget: u64,
            master_seed: u64,
        }
        let canonical = Canonical {
            suite: &self.suite,
            runs: self.runs,
            truth_budget: self.truth_budget,
            master_seed: self.master_seed,
        };
        sha256_hex(serde_json::to_string(&canonical).expect("config serializes").as_bytes())
    }

    pub fn open_archive(&self) -> Result<Archive> {
        Archive::open(&self.out_dir, &self.config_hash())
    }

    fn tune_task(&self, objective: Task, kind: TrajectoryKind) -> TuneTask {
        TuneTask {
            objective,
            kind,
            functions: self.suite.function_ids.clone(),
            instances: self.suite.instance_ids.clone(),
            dim: self.suite.dim,
            runs: self.runs,
            units_per_race: self.suite.instance_ids.len().max(5) as u32,
        }
    }
}

/// Run `body` inside a worker pool of the configured size.
fn with_pool<T: Send>(jobs: usize, body: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if jobs == 0 {
        return body();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot build worker pool: {e}")))?;
    pool.install(body)
}

/// The ground-truth labels file.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LabelsFile {
    pub truth_budget: u64,
    pub runs: u32,
    pub labels: Vec<PortfolioLabel>,
    pub class_distribution: BTreeMap<String, u32>,
}

/// Label the whole suite by portfolio runs to the truth budget and write
/// `labels.json`. Nothing is written if any instance fails.
pub fn cmd_gen_labels(config: &ExperimentConfig) -> Result<LabelsFile> {
    config.validate()?;
    let labels: Vec<PortfolioLabel> = with_pool(config.jobs, || {
        use rayon::prelude::*;
        let pairs: Vec<(u32, u32)> = config
            .suite
            .function_ids
            .iter()
            .flat_map(|&f| config.suite.instance_ids.iter().map(move |&i| (f, i)))
            .collect();
        pairs
            .par_iter()
            .map(|&(f, i)| {
                let instance = make_instance(f, i, config.suite.dim)?;
                let label_seed =
                    seed::derive(config.master_seed, "labels", &[f as u64, i as u64]);
                label_portfolio(&instance, config.runs, config.truth_budget, label_seed)
            })
            .collect()
    })?;

    let mut class_distribution: BTreeMap<String, u32> = BTreeMap::new();
    for label in &labels {
        *class_distribution.entry(label.best_solver.name().to_string()).or_insert(0) += 1;
    }
    let file = LabelsFile {
        truth_budget: config.truth_budget,
        runs: config.runs,
        labels,
        class_distribution,
    };

    let mut archive = config.open_archive()?;
    archive.write(LABELS_FILE, serde_json::to_string_pretty(&file)?.as_bytes())?;
    archive.save()?;
    Ok(file)
}

/// Load previously generated labels from the archive.
pub fn load_labels(config: &ExperimentConfig) -> Result<Vec<PortfolioLabel>> {
    let archive = config.open_archive()?;
    let text = archive.read_to_string(LABELS_FILE).map_err(|_| {
        Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!(
                "{} missing in {}; run gen-labels first",
                LABELS_FILE,
                config.out_dir.display()
            ),
        ))
    })?;
    let file: LabelsFile = serde_json::from_str(&text)?;
    Ok(file.labels)
}

/// Where evaluation inputs come from: the annealing probe with a given
/// configuration, or a portfolio solver run for some generations.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalSource {
    Probe(SAConfig),
    Portfolio { source: TrajectorySource, generations: u32 },
}

impl EvalSource {
    /// Stable tag used in file names and seed derivation. Probe tags embed
    /// a hash of the configuration values, so evaluating a tuned
    /// configuration is the same experiment no matter which command asked
    /// for it.
    pub fn tag(&self) -> String {
        match self {
            EvalSource::Probe(c) => {
                let mut bytes = Vec::with_capacity(28);
                bytes.extend(c.n_samples.to_le_bytes());
                bytes.extend(c.initial_temp.to_bits().to_le_bytes());
                bytes.extend(c.visit.to_bits().to_le_bytes());
                bytes.extend(c.acceptance.to_bits().to_le_bytes());
                format!("sa-n{}-{}", c.n_samples, &sha256_hex(&bytes)[..12])
            }
            EvalSource::Portfolio { source, generations } => {
                format!("{}-g{}", source.name().to_lowercase(), generations)
            }
        }
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TrajectoryFileSet {
    pub directory: String,
    pub files: u32,
    pub series_length: usize,
}

/// Generate per-run trajectory CSVs (`eval_index,current,best`) for a
/// source, plus a metadata sidecar.
pub fn cmd_gen_trajectories(
    config: &ExperimentConfig,
    source: &EvalSource,
    kind: TrajectoryKind,
) -> Result<TrajectoryFileSet> {
    config.validate()?;
    if let EvalSource::Probe(sa) = source {
        sa.validate()?;
    }
    let dir = format!("trajectories/{}-{}", source.tag(), kind.name());
    let mut archive = config.open_archive()?;
    let mut files = 0u32;
    let mut series_length = 0usize;

    for &f in &config.suite.function_ids {
        for &i in &config.suite.instance_ids {
            let instance = make_instance(f, i, config.suite.dim)?;
            for run in 0..config.runs {
                let unit_seed = seed::derive(
                    config.master_seed,
                    &format!("gen-traj.{}", source.tag()),
                    &[f as u64, i as u64, run as u64],
                );
                let (current, best) = match source {
                    EvalSource::Probe(sa) => {
                        let mut budget = EvalBudget::new(sa.n_samples as u64)?;
                        let r = run_gsa(&instance, sa, unit_seed, &mut budget)?;
                        (r.current, r.best)
                    }
                    EvalSource::Portfolio { source: TrajectorySource::All, generations } => {
                        let mut current = Vec::new();
                        let mut best = Vec::new();
                        for solver in SolverId::PORTFOLIO {
                            let params = SolverParams::defaults(solver);
                            let run_seed = seed::derive(unit_seed, solver.name(), &[]);
                            let mut budget = EvalBudget::new(
                                params.population as u64 * *generations as u64,
                            )?;
                            let r = run_portfolio_solver(
                                solver,
                                &instance,
                                &params,
                                *generations as usize,
                                run_seed,
                                &mut budget,
                            )?;
                            current.extend(r.current);
                            best.extend(r.best);
                        }
                        (current, best)
                    }
                    EvalSource::Portfolio {
                        source: TrajectorySource::Solver(solver),
                        generations,
                    } => {
                        if *solver == SolverId::Sa {
                            return Err(Error::Usage(
                                "probe trajectories need an SA configuration source".into(),
                            ));
                        }
                        let params = SolverParams::defaults(*solver);
                        let run_seed = seed::derive(unit_seed, solver.name(), &[]);
                        let mut budget =
                            EvalBudget::new(params.population as u64 * *generations as u64)?;
                        let r = run_portfolio_solver(
                            *solver,
                            &instance,
                            &params,
                            *generations as usize,
                            run_seed,
                            &mut budget,
                        )?;
                        (r.current, r.best)
                    }
                };
                series_length = current.len();
                let mut csv = String::from("eval_index,current,best\n");
                for (idx, (c, b)) in current.iter().zip(&best).enumerate() {
                    csv.push_str(&format!("{idx},{c},{b}\n"));
                }
                archive.write(&format!("{dir}/f{f}_i{i}_r{run}.csv"), csv.as_bytes())?;
                files += 1;
            }
        }
    }

    #[derive(serde::Serialize)]
    struct Meta<'a> {
        source: String,
        kind: &'a str,
        runs: u32,
        series_length: usize,
        master_seed: u64,
    }
    let meta = Meta {
        source: source.tag(),
        kind: kind.name(),
        runs: config.runs,
        series_length,
        master_seed: config.master_seed,
    };
    archive.write(&format!("{dir}/meta.json"), serde_json::to_string_pretty(&meta)?.as_bytes())?;
    archive.save()?;
    Ok(TrajectoryFileSet { directory: dir, files, series_length })
}

/// One elite row of the tuned-configuration file.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EliteRecord {
    pub rank: u32,
    pub n_samples: u32,
    #[serde(rename = "T")]
    pub initial_temp: f64,
    pub visit: f64,
    pub acceptance: f64,
    pub mean_cost: f64,
}

impl EliteRecord {
    pub fn config(&self) -> SAConfig {
        SAConfig {
            n_samples: self.n_samples,
            initial_temp: self.initial_temp,
            visit: self.visit,
            acceptance: self.acceptance,
        }
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ElitesFile {
    pub task: String,
    pub budget: u64,
    pub experiments_used: u64,
    pub iterations: u32,
    pub elites: Vec<EliteRecord>,
}

pub fn elites_file_name(objective: Task, kind: TrajectoryKind) -> String {
    format!("elites_{}-{}.json", objective.name(), kind.name())
}

/// Tune the probe for one task and persist the elites plus the audit log.
pub fn cmd_tune(
    config: &ExperimentConfig,
    objective: Task,
    kind: TrajectoryKind,
) -> Result<ElitesFile> {
    config.validate()?;
    let labels = load_labels(config)?;
    let task = config.tune_task(objective, kind);
    let tune_seed = seed::derive(config.master_seed, &format!("tune.{}", task.name()), &[]);

    let outcome = with_pool(config.jobs, || {
        tuner::tune(&task, &labels, config.tuning_budget, tune_seed)
    })?;

    let elites: Vec<EliteRecord> = outcome
        .elites
        .iter()
        .enumerate()
        .map(|(rank, e)| EliteRecord {
            rank: rank as u32,
            n_samples: e.config.n_samples,
            initial_temp: e.config.initial_temp,
            visit: e.config.visit,
            acceptance: e.config.acceptance,
            mean_cost: e.mean_cost,
        })
        .collect();
    let file = ElitesFile {
        task: task.name(),
        budget: config.tuning_budget,
        experiments_used: outcome.experiments_used,
        iterations: outcome.iterations,
        elites,
    };

    let mut archive = config.open_archive()?;
    archive.write(
        &elites_file_name(objective, kind),
        serde_json::to_string_pretty(&file)?.as_bytes(),
    )?;
    let mut audit = String::new();
    for record in &outcome.audit {
        audit.push_str(&serde_json::to_string(record)?);
        audit.push('\n');
    }
    archive.write(
        &format!("tune_log_{}-{}.jsonl", objective.name(), kind.name()),
        audit.as_bytes(),
    )?;
    archive.save()?;
    Ok(file)
}

/// Load the best tuned configuration for a task from the archive.
pub fn load_best_elite(
    config: &ExperimentConfig,
    objective: Task,
    kind: TrajectoryKind,
) -> Result<SAConfig> {
    let archive = config.open_archive()?;
    let text = archive.read_to_string(&elites_file_name(objective, kind))?;
    let file: ElitesFile = serde_json::from_str(&text)?;
    let best = file
        .elites
        .first()
        .ok_or_else(|| Error::Consistency("elites file holds no configurations".into()))?;
    let sa = best.config();
    sa.validate()?;
    Ok(sa)
}

/// Metrics of one repeated evaluation.
#[derive(Debug, Clone)]
pub struct RepeatMetrics {
    pub repeat: u32,
    pub fold_scores: Vec<eval::FoldScore>,
    pub metrics: Metrics,
}

/// Result of an evaluation command: per-repeat metrics plus the CSV path.
#[derive(Debug, Clone)]
pub struct EvaluationSummary {
    pub name: String,
    pub csv_path: String,
    pub repeats: Vec<RepeatMetrics>,
    pub metric_name: &'static str,
}

impl EvaluationSummary {
    /// Median over repeats of the per-repeat medians.
    pub fn median_of_medians(&self) -> f64 {
        let mut medians: Vec<f64> = self.repeats.iter().map(|r| r.metrics.median).collect();
        medians.sort_by(|a, b| a.total_cmp(b));
        let n = medians.len();
        if n % 2 == 1 { medians[n / 2] } else { 0.5 * (medians[n / 2 - 1] + medians[n / 2]) }
    }
}

fn metric_name_of(task: Task) -> &'static str {
    match task {
        Task::Classification => "accuracy",
        Task::Regression(_) => "rmse",
    }
}

/// Build the dataset one repeat of an evaluation works on.
fn build_dataset(
    config: &ExperimentConfig,
    task: Task,
    modality: Modality,
    source: &EvalSource,
    kind: TrajectoryKind,
    ela_points_per_dim: u32,
    labels: &[PortfolioLabel],
    stream_seed: u64,
) -> Result<LabeledDataset> {
    if modality == Modality::Ela {
        let k = (ela_points_per_dim as usize) * config.suite.dim;
        let mut samples = Vec::new();
        for &f in &config.suite.function_ids {
            for &i in &config.suite.instance_ids {
                let instance = make_instance(f, i, config.suite.dim)?;
                for v in 0..ELA_VECTORS_PER_INSTANCE {
                    let sample_seed =
                        seed::derive(stream_seed, "ela.vector", &[f as u64, i as u64, v as u64]);
                    let mut budget = EvalBudget::new(k as u64)?;
                    let points =
                        bench::low_discrepancy_sample(&instance, k, sample_seed, &mut budget)?;
                    samples.push(ElaSample {
                        function_id: f,
                        instance_id: i,
                        sample_seed,
                        features: ela_features(&points)?,
                    });
                }
            }
        }
        return assemble_ela_dataset(&samples, labels, task);
    }

    let trajectories = match source {
        EvalSource::Probe(sa) => eval::probe_trajectories(
            &config.suite.function_ids,
            &config.suite.instance_ids,
            config.suite.dim,
            config.runs,
            sa,
            kind,
            stream_seed,
        )?,
        EvalSource::Portfolio { source, generations } => eval::portfolio_trajectories(
            &config.suite.function_ids,
            &config.suite.instance_ids,
            config.suite.dim,
            config.runs,
            *source,
            kind,
            *generations as usize,
            stream_seed,
        )?,
    };
    assemble_dataset(
        &trajectories,
        labels,
        task,
        modality,
        seed::derive(stream_seed, "selection", &[]),
    )
}

fn metrics_csv(summary: &[RepeatMetrics], metric_name: &str, provenance: Option<&str>) -> String {
    let mut out = String::from("repeat,fold,n_train,n_val,metric,value,value_mean");
    if provenance.is_some() {
        out.push_str(",provenance");
    }
    out.push('\n');
    let suffix = |row: &mut String| {
        if let Some(p) = provenance {
            row.push(',');
            row.push_str(p);
        }
        row.push('\n');
    };
    for repeat in summary {
        for fold in &repeat.fold_scores {
            let mut row = format!(
                "{},{},{},{},{metric_name},{},",
                repeat.repeat, fold.instance_id, fold.n_train, fold.n_val, fold.value
            );
            suffix(&mut row);
            out.push_str(&row);
        }
        let mut row = format!(
            "{},aggregate,,,{metric_name},{},{}",
            repeat.repeat, repeat.metrics.median, repeat.metrics.mean
        );
        suffix(&mut row);
        out.push_str(&row);
    }
    out
}

fn run_evaluation(
    config: &ExperimentConfig,
    task: Task,
    modality: Modality,
    source: &EvalSource,
    kind: TrajectoryKind,
    ela_points_per_dim: u32,
    name: String,
    provenance: Option<&str>,
) -> Result<EvaluationSummary> {
    config.validate()?;
    if let EvalSource::Probe(sa) = source {
        sa.validate()?;
    }
    if modality == Modality::Ela && !matches!(ela_points_per_dim, 30 | 50) {
        return Err(Error::Usage(
            "landscape sampling supports 30 or 50 points per dimension".into(),
        ));
    }
    let labels = load_labels(config)?;

    let repeats: Vec<RepeatMetrics> = with_pool(config.jobs, || {
        (0..config.repeats)
            .map(|repeat| {
                let stream_seed =
                    seed::derive(config.master_seed, &format!("eval.{name}"), &[repeat as u64]);
                let dataset = build_dataset(
                    config,
                    task,
                    modality,
                    source,
                    kind,
                    ela_points_per_dim,
                    &labels,
                    stream_seed,
                )?;
                let (fold_scores, metrics) = eval::loio_metrics(
                    &dataset,
                    eval::default_trees(),
                    seed::derive(stream_seed, "score", &[]),
                )?;
                Ok(RepeatMetrics { repeat, fold_scores, metrics })
            })
            .collect()
    })?;

    let csv = metrics_csv(&repeats, metric_name_of(task), provenance);
    let csv_path = format!("metrics_{name}.csv");
    let mut archive = config.open_archive()?;
    archive.write(&csv_path, csv.as_bytes())?;
    archive.save()?;
    Ok(EvaluationSummary { name, csv_path, repeats, metric_name: metric_name_of(task) })
}

/// Evaluate one input pipeline under leave-one-instance-out
/// cross-validation, repeated `config.repeats` times.
///
/// Model choice follows the modality: feature inputs go to random forests,
/// raw trajectories to the rotation forest (classification) or time-series
/// forest (regression).
pub fn cmd_evaluate(
    config: &ExperimentConfig,
    task: Task,
    modality: Modality,
    source: &EvalSource,
    kind: TrajectoryKind,
    ela_points_per_dim: u32,
) -> Result<EvaluationSummary> {
    let name = match modality {
        Modality::Ela => format!(
            "{}_ela{}d",
            task.name(),
            ela_points_per_dim
        ),
        _ => format!(
            "{}_{}_{}_{}",
            task.name(),
            modality.name(),
            source.tag(),
            kind.name()
        ),
    };
    run_evaluation(config, task, modality, source, kind, ela_points_per_dim, name, None)
}

/// Evaluate a target task using the configuration tuned for a source task.
pub fn cmd_transfer(
    config: &ExperimentConfig,
    source_objective: Task,
    source_kind: TrajectoryKind,
    target: Task,
    target_kind: TrajectoryKind,
) -> Result<EvaluationSummary> {
    let tuned = load_best_elite(config, source_objective, source_kind)?;
    let source_task_name = format!("{}-{}", source_objective.name(), source_kind.name());
    let source = EvalSource::Probe(tuned);
    let name = format!(
        "{}_{}_{}_{}",
        target.name(),
        Modality::Raw.name(),
        source.tag(),
        target_kind.name()
    );
    run_evaluation(
        config,
        target,
        Modality::Raw,
        &source,
        target_kind,
        0,
        format!("transfer_{source_task_name}__{name}"),
        Some(&source_task_name),
    )
}

/// One line of the report, summarizing a metrics file.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ReportRow {
    pub file: String,
    pub metric: String,
    pub repeats: u32,
    pub median: f64,
    pub mean: f64,
}

/// Summarize every metrics file in the archive; cross-checks that stored
/// aggregates match the fold rows they came from.
pub fn cmd_report(config: &ExperimentConfig) -> Result<(Vec<ReportRow>, String)> {
    let archive = config.open_archive()?;
    let mut rows = Vec::new();
    let mut names: Vec<String> = archive
        .manifest()
        .files
        .keys()
        .filter(|k| k.starts_with("metrics_") && k.ends_with(".csv"))
        .cloned()
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(Error::Usage("archive holds no metrics files; run evaluate first".into()));
    }

    for name in names {
        let text = archive.read_to_string(&name)?;
        let mut metric = String::new();
        let mut fold_values: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        let mut aggregates: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for line in text.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 7 {
                continue;
            }
            let repeat: u32 = fields[0]
                .parse()
                .map_err(|_| Error::Consistency(format!("bad repeat field in {name}")))?;
            metric = fields[4].to_string();
            if fields[1] == "aggregate" {
                let median: f64 = fields[5]
                    .parse()
                    .map_err(|_| Error::Consistency(format!("bad aggregate in {name}")))?;
                let mean: f64 = fields[6]
                    .parse()
                    .map_err(|_| Error::Consistency(format!("bad aggregate in {name}")))?;
                aggregates.insert(repeat, (median, mean));
            } else {
                let value: f64 = fields[5]
                    .parse()
                    .map_err(|_| Error::Consistency(format!("bad value in {name}")))?;
                fold_values.entry(repeat).or_default().push(value);
            }
        }
        let mut medians = Vec::new();
        let mut means = Vec::new();
        for (repeat, values) in &fold_values {
            let recomputed = Metrics::from_folds(values.clone())?;
            let (stored_median, stored_mean) = aggregates
                .get(repeat)
                .ok_or_else(|| Error::Consistency(format!("{name}: repeat {repeat} lacks an aggregate row")))?;
            if recomputed.median != *stored_median {
                return Err(Error::Consistency(format!(
                    "{name}: stored median {stored_median} != recomputed {}",
                    recomputed.median
                )));
            }
            if recomputed.mean != *stored_mean {
                return Err(Error::Consistency(format!(
                    "{name}: stored mean {stored_mean} != recomputed {}",
                    recomputed.mean
                )));
            }
            medians.push(recomputed.median);
            means.push(recomputed.mean);
        }
        let across = Metrics::from_folds(medians)?;
        let mean_of_means = means.iter().sum::<f64>() / means.len() as f64;
        rows.push(ReportRow {
            file: name,
            metric,
            repeats: fold_values.len() as u32,
            median: across.median,
            mean: mean_of_means,
        });
    }

    let mut table = format!("{:<72} {:>9} {:>8} {:>12} {:>12}\n", "file", "metric", "repeats", "median", "mean");
    let mut csv = String::from("file,metric,repeats,median,mean\n");
    for row in &rows {
        table.push_str(&format!(
            "{:<72} {:>9} {:>8} {:>12.6} {:>12.6}\n",
            row.file, row.metric, row.repeats, row.median, row.mean
        ));
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.file, row.metric, row.repeats, row.median, row.mean
        ));
    }
    let mut archive = config.open_archive()?;
    archive.write("report.csv", csv.as_bytes())?;
    archive.write("report.txt", table.as_bytes())?;
    archive.save()?;
    Ok((rows, table))
}

/// Catalog passthrough for the `list-functions` command.
pub fn list_functions() -> Vec<(u32, &'static str, &'static str, bool)> {
    bench::CATALOG
        .iter()
        .map(|f| {
            let group = match f.group {
                bench::FunctionGroup::Separable => "separable",
                bench::FunctionGroup::LowConditioning => "low-conditioning",
                bench::FunctionGroup::HighConditioning => "high-conditioning",
                bench::FunctionGroup::MultimodalStructured => "multimodal-structured",
                bench::FunctionGroup::MultimodalWeak => "multimodal-weak",
            };
            (f.id, f.name, group, f.rotated)
        })
        .collect()
}
