//! Workbench for learning discriminating probe trajectories for algorithm
//! selection over a portfolio of continuous black-box optimizers.
//!
//! The pipeline, bottom to top:
//!
//! * [`bench`] — benchmark functions, seeded instance transformations,
//!   evaluation budgets, and low-discrepancy sampling.
//! * [`solvers`] — the portfolio (CMA-ES, DE, PSO), the tunable
//!   simulated-annealing probe, and ground-truth labeling runs.
//! * [`trajectory`] — trajectory post-processing and fold-tagged dataset
//!   assembly.
//! * [`features`] — time-series features, shadow-feature selection, and the
//!   sampled-landscape feature baseline.
//! * [`models`] — tree-ensemble learners (random forest, rotation forest,
//!   time-series forest) and metrics.
//! * [`tuner`] — iterated-racing configurator searching the probe's
//!   parameter space against a model-quality objective.
//! * [`pipeline`] — experiment configuration, command drivers, and the
//!   reproducible run archive.

pub mod bench;
pub mod error;
pub mod features;
pub mod models;
pub mod pipeline;
pub mod seed;
pub mod solvers;
pub mod trajectory;
pub mod tuner;

pub use error::{Error, Result};
