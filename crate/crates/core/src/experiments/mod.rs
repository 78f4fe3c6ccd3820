//! Configured ensembles of walks, their summaries and persisted outputs.

pub mod config;
pub mod envelope;
pub mod persist;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, Normalization, RadiusRule, Statistic, TheoremTag};
pub use report::{scaling_report, ScalingReport};
pub use runner::{run_experiment, EstimateRecord, ExperimentResult};
