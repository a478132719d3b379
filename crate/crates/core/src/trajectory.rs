//! Trajectory post-processing and fold-tagged dataset assembly.
//!
//! A trajectory is a solver-tagged fitness time series of kind `Current`
//! (raw per-evaluation fitness) or `Best` (prefix minimum). Datasets pair
//! model inputs with best-solver labels or performance targets and tag every
//! row with its instance for leave-one-instance-out validation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::features::{self, FeatureVector};
use crate::solvers::{PortfolioLabel, RunResult, SolverId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryKind {
    Current,
    Best,
}

impl TrajectoryKind {
    pub fn name(&self) -> &'static str {
        match self {
            TrajectoryKind::Current => "current",
            TrajectoryKind::Best => "best",
        }
    }
}

/// Where a trajectory came from: a single solver or the fixed-order
/// concatenation over the whole portfolio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TrajectorySource {
    Solver(SolverId),
    All,
}

impl TrajectorySource {
    pub fn name(&self) -> &'static str {
        match self {
            TrajectorySource::Solver(s) => s.name(),
            TrajectorySource::All => "ALL",
        }
    }
}

/// A seeded, solver-tagged fitness time series.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Trajectory {
    pub values: Vec<f64>,
    pub kind: TrajectoryKind,
    pub source: TrajectorySource,
    pub function_id: u32,
    pub instance_id: u32,
    /// Seed of the run unit this series belongs to; shared by the portfolio
    /// runs of one repetition so they can be concatenated.
    pub run_seed: u64,
}

impl Trajectory {
    /// Wrap one logged run, picking the requested series kind.
    pub fn from_run(
        run: &RunResult,
        kind: TrajectoryKind,
        source: TrajectorySource,
        function_id: u32,
        instance_id: u32,
        run_seed: u64,
    ) -> Self {
        let values = match kind {
            TrajectoryKind::Current => run.current.clone(),
            TrajectoryKind::Best => run.best.clone(),
        };
        Trajectory { values, kind, source, function_id, instance_id, run_seed }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Prefix-minimum view of a trajectory. Idempotent: a `Best` series is
/// already non-increasing and passes through unchanged.
pub fn to_best(trajectory: &Trajectory) -> Result<Trajectory> {
    if trajectory.values.is_empty() {
        return Err(Error::domain("cannot take the best view of an empty trajectory"));
    }
    let mut values = Vec::with_capacity(trajectory.values.len());
    let mut running = f64::INFINITY;
    for &v in &trajectory.values {
        running = running.min(v);
        values.push(running);
    }
    Ok(Trajectory { values, kind: TrajectoryKind::Best, ..trajectory.clone() })
}

/// First `n` values, metadata preserved.
pub fn truncate(trajectory: &Trajectory, n: usize) -> Result<Trajectory> {
    if n < 1 || n > trajectory.values.len() {
        return Err(Error::domain(format!(
            "truncation length {n} outside [1, {}]",
            trajectory.values.len()
        )));
    }
    Ok(Trajectory { values: trajectory.values[..n].to_vec(), ..trajectory.clone() })
}

/// Concatenate one trajectory per portfolio solver, in fixed solver order,
/// into a single "ALL" trajectory.
pub fn concat_all(parts: &[Trajectory]) -> Result<Trajectory> {
    if parts.len() != SolverId::PORTFOLIO.len() {
        return Err(Error::domain(format!(
            "expected {} parts in portfolio order, got {}",
            SolverId::PORTFOLIO.len(),
            parts.len()
        )));
    }
    let head = &parts[0];
    for (part, &expected) in parts.iter().zip(&SolverId::PORTFOLIO) {
        match part.source {
            TrajectorySource::Solver(s) if s == expected => {}
            _ => {
                return Err(Error::domain(format!(
                    "part source {} does not follow portfolio order",
                    part.source.name()
                )));
            }
        }
        if part.kind != head.kind
            || part.function_id != head.function_id
            || part.instance_id != head.instance_id
            || part.run_seed != head.run_seed
        {
            return Err(Error::domain("concatenation parts must share kind, instance, and run"));
        }
    }
    let values: Vec<f64> = parts.iter().flat_map(|p| p.values.iter().copied()).collect();
    Ok(Trajectory {
        values,
        kind: head.kind,
        source: TrajectorySource::All,
        function_id: head.function_id,
        instance_id: head.instance_id,
        run_seed: head.run_seed,
    })
}

/// The two learning tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Task {
    Classification,
    Regression(SolverId),
}

impl Task {
    pub fn name(&self) -> String {
        match self {
            Task::Classification => "classification".into(),
            Task::Regression(s) => format!("regression-{}", s.name().to_lowercase()),
        }
    }
}

/// How model inputs are derived from runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    Raw,
    TsFeatures,
    TsFeaturesSelected,
    Ela,
}

impl Modality {
    pub fn name(&self) -> &'static str {
        match self {
            Modality::Raw => "raw",
            Modality::TsFeatures => "ts-features",
            Modality::TsFeaturesSelected => "ts-features-selected",
            Modality::Ela => "ela",
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum RowLabel {
    Class(SolverId),
    Target(f64),
}

/// One model input row, fold-tagged by instance.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DataRow {
    pub input: Vec<f64>,
    pub label: RowLabel,
    pub function_id: u32,
    pub instance_id: u32,
    pub run_seed: u64,
}

/// Model inputs paired with labels or targets, uniform in modality and
/// input schema.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LabeledDataset {
    pub rows: Vec<DataRow>,
    pub task: Task,
    pub modality: Modality,
    /// Feature names for feature modalities; `None` for raw series.
    pub feature_names: Option<Vec<String>>,
    /// Set when feature sanitization clamped an infinite value.
    pub sanitization_clamped: bool,
}

/// A sampled-landscape feature vector for one instance, with the seed of the
/// sampling stream that produced it.
#[derive(Debug, Clone)]
pub struct ElaSample {
    pub function_id: u32,
    pub instance_id: u32,
    pub sample_seed: u64,
    pub features: FeatureVector,
}

impl LabeledDataset {
    pub fn fold_of_row(&self, row: usize) -> u32 {
        self.rows[row].instance_id
    }

    pub fn input_width(&self) -> usize {
        self.rows.first().map(|r| r.input.len()).unwrap_or(0)
    }

    /// Distinct instance ids, ascending.
    pub fn instance_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.rows.iter().map(|r| r.instance_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Input matrix restricted to the given row indices.
    pub fn matrix(&self, rows: &[usize]) -> Vec<Vec<f64>> {
        rows.iter().map(|&r| self.rows[r].input.clone()).collect()
    }

    /// Class indices (position in the fixed portfolio order) for the rows.
    pub fn class_indices(&self, rows: &[usize]) -> Result<Vec<usize>> {
        rows.iter()
            .map(|&r| match &self.rows[r].label {
                RowLabel::Class(s) => SolverId::PORTFOLIO
                    .iter()
                    .position(|p| p == s)
                    .ok_or_else(|| Error::domain("label outside the portfolio")),
                RowLabel::Target(_) => {
                    Err(Error::domain("regression rows carry targets, not classes"))
                }
            })
            .collect()
    }

    /// Regression targets for the rows.
    pub fn targets(&self, rows: &[usize]) -> Result<Vec<f64>> {
        rows.iter()
            .map(|&r| match &self.rows[r].label {
                RowLabel::Target(t) => Ok(*t),
                RowLabel::Class(_) => {
                    Err(Error::domain("classification rows carry classes, not targets"))
                }
            })
            .collect()
    }

    /// CSV export with the stable header
    /// `row_id,function_id,instance_id,run_seed,fold,label_or_target,...`,
    /// where the value columns carry feature names when the modality has
    /// them and `v0..vK` for raw series.
    pub fn to_csv(&self) -> String {
        let width = self.input_width();
        let mut out = String::from("row_id,function_id,instance_id,run_seed,fold,label_or_target");
        match &self.feature_names {
            Some(names) => {
                for name in names {
                    out.push(',');
                    out.push_str(name);
                }
            }
            None => {
                for k in 0..width {
                    out.push_str(&format!(",v{k}"));
                }
            }
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let label = match &row.label {
                RowLabel::Class(s) => s.name().to_string(),
                RowLabel::Target(t) => format!("{t}"),
            };
            out.push_str(&format!(
                "{i},{},{},{},{},{label}",
                row.function_id, row.instance_id, row.run_seed, row.instance_id
            ));
            for v in &row.input {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

fn label_for(
    labels: &BTreeMap<(u32, u32), &PortfolioLabel>,
    function_id: u32,
    instance_id: u32,
    task: Task,
) -> Result<RowLabel> {
    let record = labels.get(&(function_id, instance_id)).ok_or_else(|| {
        Error::Consistency(format!("no label record for function {function_id} instance {instance_id}"))
    })?;
    Ok(match task {
        Task::Classification => RowLabel::Class(record.best_solver),
        Task::Regression(solver) => RowLabel::Target(record.median_final.get(solver)),
    })
}

fn index_labels(labels: &[PortfolioLabel]) -> BTreeMap<(u32, u32), &PortfolioLabel> {
    labels.iter().map(|l| ((l.function_id, l.instance_id), l)).collect()
}

/// Build a dataset from trajectories: one row per run.
///
/// `Raw` keeps the series as the input (lengths must agree across rows);
/// the feature modalities extract the fixed time-series catalog, optionally
/// restricted by seeded shadow-feature selection.
pub fn assemble_dataset(
    trajectories: &[Trajectory],
    labels: &[PortfolioLabel],
    task: Task,
    modality: Modality,
    selection_seed: u64,
) -> Result<LabeledDataset> {
    if trajectories.is_empty() {
        return Err(Error::domain("cannot assemble a dataset from zero trajectories"));
    }
    if modality == Modality::Ela {
        return Err(Error::domain(
            "the sampled-landscape modality takes feature vectors, not trajectories",
        ));
    }
    let label_index = index_labels(labels);

    let mut rows = Vec::with_capacity(trajectories.len());
    let mut feature_names: Option<Vec<String>> = None;
    let mut clamped = false;
    for t in trajectories {
        let label = label_for(&label_index, t.function_id, t.instance_id, task)?;
        let input = match modality {
            Modality::Raw => t.values.clone(),
            Modality::TsFeatures | Modality::TsFeaturesSelected => {
                let fv = features::ts_features(t)?;
                clamped |= fv.clamped;
                if feature_names.is_none() {
                    feature_names = Some(fv.names.clone());
                }
                fv.values
            }
            Modality::Ela => unreachable!(),
        };
        rows.push(DataRow {
            input,
            label,
            function_id: t.function_id,
            instance_id: t.instance_id,
            run_seed: t.run_seed,
        });
    }

    let width = rows[0].input.len();
    if rows.iter().any(|r| r.input.len() != width) {
        return Err(Error::Consistency(
            "raw trajectory inputs must share one length; train per source instead of padding"
                .into(),
        ));
    }

    let mut dataset = LabeledDataset {
        rows,
        task,
        modality,
        feature_names,
        sanitization_clamped: clamped,
    };

    if modality == Modality::TsFeaturesSelected {
        apply_selection(&mut dataset, selection_seed)?;
    }
    Ok(dataset)
}

/// Run shadow-feature selection over the assembled feature matrix and keep
/// only the confirmed columns.
fn apply_selection(dataset: &mut LabeledDataset, selection_seed: u64) -> Result<()> {
    let matrix: Vec<Vec<f64>> = dataset.rows.iter().map(|r| r.input.clone()).collect();
    let names = dataset.feature_names.clone().expect("feature modality has names");
    let target = selection_target(dataset)?;
    let mask = features::select_features(
        &matrix,
        &names,
        &target,
        features::SELECTION_DEFAULT_ITERATIONS,
        features::SELECTION_DEFAULT_ALPHA,
        selection_seed,
    )?;
    let keep: Vec<usize> =
        (0..names.len()).filter(|&i| mask.keep[i]).collect();
    for row in &mut dataset.rows {
        row.input = keep.iter().map(|&i| row.input[i]).collect();
    }
    dataset.feature_names = Some(keep.iter().map(|&i| names[i].clone()).collect());
    Ok(())
}

fn selection_target(dataset: &LabeledDataset) -> Result<features::SelectionTarget> {
    Ok(match dataset.task {
        Task::Classification => {
            let classes: Vec<usize> = dataset
                .rows
                .iter()
                .map(|r| match &r.label {
                    RowLabel::Class(s) => SolverId::PORTFOLIO.iter().position(|p| p == s).unwrap(),
                    RowLabel::Target(_) => unreachable!("classification rows carry classes"),
                })
                .collect();
            features::SelectionTarget::Classes(classes)
        }
        Task::Regression(_) => {
            let targets: Vec<f64> = dataset
                .rows
                .iter()
                .map(|r| match &r.label {
                    RowLabel::Target(t) => *t,
                    RowLabel::Class(_) => unreachable!("regression rows carry targets"),
                })
                .collect();
            features::SelectionTarget::Targets(targets)
        }
    })
}

/// Build a dataset from per-instance sampled-landscape feature vectors:
/// one row per sampled vector.
pub fn assemble_ela_dataset(
    samples: &[ElaSample],
    labels: &[PortfolioLabel],
    task: Task,
) -> Result<LabeledDataset> {
    if samples.is_empty() {
        return Err(Error::domain("cannot assemble a dataset from zero feature vectors"));
    }
    let label_index = index_labels(labels);
    let names = samples[0].features.names.clone();
    let mut clamped = false;
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        if s.features.names != names {
            return Err(Error::Consistency("feature vectors disagree on the name schema".into()));
        }
        clamped |= s.features.clamped;
        let label = label_for(&label_index, s.function_id, s.instance_id, task)?;
        rows.push(DataRow {
            input: s.features.values.clone(),
            label,
            function_id: s.function_id,
            instance_id: s.instance_id,
            run_seed: s.sample_seed,
        });
    }
    Ok(LabeledDataset {
        rows,
        task,
        modality: Modality::Ela,
        feature_names: Some(names),
        sanitization_clamped: clamped,
    })
}

/// One cross-validation fold: validation rows belong to a single instance.
#[derive(Debug, Clone)]
pub struct Fold {
    pub instance_id: u32,
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Leave-one-instance-out folds: one fold per distinct instance id.
pub fn loio_folds(dataset: &LabeledDataset) -> Result<Vec<Fold>> {
    let ids = dataset.instance_ids();
    if ids.len() < 2 {
        return Err(Error::domain("leave-one-instance-out needs at least 2 distinct instances"));
    }
    Ok(ids
        .into_iter()
        .map(|held_out| {
            let mut train = Vec::new();
            let mut validation = Vec::new();
            for (i, row) in dataset.rows.iter().enumerate() {
                if row.instance_id == held_out {
                    validation.push(i);
                } else {
                    train.push(i);
                }
            }
            Fold { instance_id: held_out, train, validation }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::MedianFinals;

    fn trajectory(
        values: Vec<f64>,
        source: TrajectorySource,
        function_id: u32,
        instance_id: u32,
        run_seed: u64,
    ) -> Trajectory {
        Trajectory {
            values,
            kind: TrajectoryKind::Current,
            source,
            function_id,
            instance_id,
            run_seed,
        }
    }

    fn synthetic_labels(functions: &[u32], instances: &[u32]) -> Vec<PortfolioLabel> {
        let mut out = Vec::new();
        for &f in functions {
            for &i in instances {
                let median_final = MedianFinals {
                    cmaes: f as f64,
                    de: f as f64 + i as f64,
                    pso: f as f64 * 2.0 + 1.0,
                };
                out.push(PortfolioLabel {
                    function_id: f,
                    instance_id: i,
                    best_solver: if f % 2 == 0 { SolverId::De } else { SolverId::Cmaes },
                    median_final,
                });
            }
        }
        out
    }

    #[test]
    fn to_best_is_prefix_minimum_and_idempotent() {
        let t = trajectory(vec![3.0, 1.0, 2.0], TrajectorySource::Solver(SolverId::Sa), 1, 1, 0);
        let b = to_best(&t).unwrap();
        assert_eq!(b.values, vec![3.0, 1.0, 1.0]);
        assert_eq!(b.kind, TrajectoryKind::Best);
        let bb = to_best(&b).unwrap();
        assert_eq!(bb.values, b.values);
    }

    #[test]
    fn to_best_of_empty_is_a_domain_error() {
        let t = trajectory(vec![], TrajectorySource::Solver(SolverId::Sa), 1, 1, 0);
        assert!(to_best(&t).is_err());
    }

    #[test]
    fn truncate_bounds() {
        let t = trajectory((0..100).map(|i| i as f64).collect(), TrajectorySource::All, 1, 1, 0);
        assert_eq!(truncate(&t, 100).unwrap().values.len(), 100);
        assert_eq!(truncate(&t, 5).unwrap().values, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(truncate(&t, 0).is_err());
        assert!(truncate(&t, 101).is_err());
    }

    #[test]
    fn concat_all_lengths_add_up() {
        let parts = vec![
            trajectory(vec![0.0; 20], TrajectorySource::Solver(SolverId::Cmaes), 3, 2, 9),
            trajectory(vec![0.0; 60], TrajectorySource::Solver(SolverId::De), 3, 2, 9),
            trajectory(vec![0.0; 80], TrajectorySource::Solver(SolverId::Pso), 3, 2, 9),
        ];
        let all = concat_all(&parts).unwrap();
        assert_eq!(all.len(), 160);
        assert_eq!(all.source, TrajectorySource::All);
        assert_eq!(all.function_id, 3);
    }

    #[test]
    fn concat_all_rejects_mixed_instances_and_wrong_order() {
        let mut parts = vec![
            trajectory(vec![0.0; 2], TrajectorySource::Solver(SolverId::Cmaes), 3, 2, 9),
            trajectory(vec![0.0; 2], TrajectorySource::Solver(SolverId::De), 3, 3, 9),
            trajectory(vec![0.0; 2], TrajectorySource::Solver(SolverId::Pso), 3, 2, 9),
        ];
        assert!(concat_all(&parts).is_err());
        parts[1].instance_id = 2;
        parts.swap(0, 1);
        assert!(concat_all(&parts).is_err());
    }

    #[test]
    fn assemble_counts_rows_and_projects_regression_targets() {
        let functions: Vec<u32> = (1..=4).collect();
        let instances: Vec<u32> = (1..=3).collect();
        let labels = synthetic_labels(&functions, &instances);
        let mut trajectories = Vec::new();
        for &f in &functions {
            for &i in &instances {
                for run in 0..2u64 {
                    trajectories.push(trajectory(
                        vec![1.0, 2.0, 3.0, 4.0],
                        TrajectorySource::Solver(SolverId::Sa),
                        f,
                        i,
                        run,
                    ));
                }
            }
        }
        let ds = assemble_dataset(
            &trajectories,
            &labels,
            Task::Regression(SolverId::Cmaes),
            Modality::Raw,
            0,
        )
        .unwrap();
        assert_eq!(ds.rows.len(), 4 * 3 * 2);
        for row in &ds.rows {
            assert_eq!(row.label, RowLabel::Target(row.function_id as f64));
        }
    }

    #[test]
    fn missing_label_is_a_consistency_error() {
        let labels = synthetic_labels(&[1], &[1]);
        let trajectories =
            vec![trajectory(vec![1.0, 2.0], TrajectorySource::Solver(SolverId::Sa), 1, 2, 0)];
        assert!(matches!(
            assemble_dataset(&trajectories, &labels, Task::Classification, Modality::Raw, 0),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn loio_fold_arithmetic_matches_suite_shape() {
        // 24 functions x 5 instances x 5 runs: 480 train / 120 validation.
        let functions: Vec<u32> = (1..=24).collect();
        let instances: Vec<u32> = (1..=5).collect();
        let labels = synthetic_labels(&functions, &instances);
        let mut trajectories = Vec::new();
        for &f in &functions {
            for &i in &instances {
                for run in 0..5u64 {
                    trajectories.push(trajectory(
                        vec![0.5; 8],
                        TrajectorySource::Solver(SolverId::Sa),
                        f,
                        i,
                        run,
                    ));
                }
            }
        }
        let ds =
            assemble_dataset(&trajectories, &labels, Task::Classification, Modality::Raw, 0)
                .unwrap();
        assert_eq!(ds.rows.len(), 600);
        let folds = loio_folds(&ds).unwrap();
        assert_eq!(folds.len(), 5);
        for fold in &folds {
            assert_eq!(fold.train.len(), 480);
            assert_eq!(fold.validation.len(), 120);
        }
    }

    #[test]
    fn folds_partition_the_dataset() {
        let labels = synthetic_labels(&[1, 2], &[1, 2, 3]);
        let mut trajectories = Vec::new();
        for f in 1..=2u32 {
            for i in 1..=3u32 {
                trajectories.push(trajectory(
                    vec![f as f64, i as f64],
                    TrajectorySource::Solver(SolverId::Sa),
                    f,
                    i,
                    0,
                ));
            }
        }
        let ds =
            assemble_dataset(&trajectories, &labels, Task::Classification, Modality::Raw, 0)
                .unwrap();
        let folds = loio_folds(&ds).unwrap();
        let mut seen = vec![false; ds.rows.len()];
        for fold in &folds {
            for &v in &fold.validation {
                assert!(!seen[v], "validation sets overlap");
                seen[v] = true;
            }
            for &t in &fold.train {
                assert!(!fold.validation.contains(&t));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn csv_export_carries_schema_and_fold_tags() {
        let labels = synthetic_labels(&[1], &[1, 2]);
        let trajectories = vec![
            trajectory(vec![1.0, 2.0, 3.0, 4.0], TrajectorySource::Solver(SolverId::Sa), 1, 1, 7),
            trajectory(vec![4.0, 3.0, 2.0, 1.0], TrajectorySource::Solver(SolverId::Sa), 1, 2, 8),
        ];
        let raw = assemble_dataset(&trajectories, &labels, Task::Classification, Modality::Raw, 0)
            .unwrap();
        let csv = raw.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "row_id,function_id,instance_id,run_seed,fold,label_or_target,v0,v1,v2,v3"
        );
        assert_eq!(lines.next().unwrap(), "0,1,1,7,1,CMAES,1,2,3,4");

        let featured =
            assemble_dataset(&trajectories, &labels, Task::Classification, Modality::TsFeatures, 0)
                .unwrap();
        let header = featured.to_csv().lines().next().unwrap().to_string();
        assert!(header.contains(",mean,"));
        assert!(header.ends_with(",binned_entropy"));
    }

    #[test]
    fn single_instance_cannot_fold() {
        let labels = synthetic_labels(&[1], &[1]);
        let trajectories =
            vec![trajectory(vec![0.0, 1.0], TrajectorySource::Solver(SolverId::Sa), 1, 1, 0)];
        let ds =
            assemble_dataset(&trajectories, &labels, Task::Classification, Modality::Raw, 0)
                .unwrap();
        assert!(loio_folds(&ds).is_err());
    }

    #[test]
    fn unequal_raw_lengths_are_rejected() {
        let labels = synthetic_labels(&[1], &[1, 2]);
        let trajectories = vec![
            trajectory(vec![0.0; 4], TrajectorySource::Solver(SolverId::Sa), 1, 1, 0),
            trajectory(vec![0.0; 5], TrajectorySource::Solver(SolverId::Sa), 1, 2, 0),
        ];
        assert!(matches!(
            assemble_dataset(&trajectories, &labels, Task::Classification, Modality::Raw, 0),
            Err(Error::Consistency(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn finite_series() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-1e12..1e12_f64, 1..200)
        }

        proptest! {
            #[test]
            fn to_best_is_idempotent_and_prefix_minimal(values in finite_series()) {
                let t = trajectory(
                    values.clone(),
                    TrajectorySource::Solver(SolverId::Sa),
                    1,
                    1,
                    0,
                );
                let once = to_best(&t).unwrap();
                let twice = to_best(&once).unwrap();
                prop_assert_eq!(&once.values, &twice.values);
                let mut running = f64::INFINITY;
                for (c, b) in values.iter().zip(&once.values) {
                    running = running.min(*c);
                    prop_assert_eq!(*b, running);
                }
                for pair in once.values.windows(2) {
                    prop_assert!(pair[1] <= pair[0]);
                }
            }

            #[test]
            fn concat_length_is_additive(
                a in finite_series(),
                b in finite_series(),
                c in finite_series(),
            ) {
                let parts = vec![
                    trajectory(a.clone(), TrajectorySource::Solver(SolverId::Cmaes), 2, 3, 4),
                    trajectory(b.clone(), TrajectorySource::Solver(SolverId::De), 2, 3, 4),
                    trajectory(c.clone(), TrajectorySource::Solver(SolverId::Pso), 2, 3, 4),
                ];
                let all = concat_all(&parts).unwrap();
                prop_assert_eq!(all.len(), a.len() + b.len() + c.len());
            }

            #[test]
            fn truncate_keeps_a_prefix(values in finite_series(), pick in 0usize..200) {
                let t = trajectory(
                    values.clone(),
                    TrajectorySource::Solver(SolverId::Sa),
                    1,
                    1,
                    0,
                );
                let n = 1 + pick % values.len();
                let cut = truncate(&t, n).unwrap();
                prop_assert_eq!(cut.values.len(), n);
                prop_assert_eq!(&cut.values[..], &values[..n]);
            }
        }
    }
}
