//! Experiment harness around `blowup-core`: config files, the single-run
//! pipeline, parameter sweeps and artifact files.

// `!(x > 0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiment;
pub mod oracle;
pub mod report;
pub mod sweep;

pub use config::{load_config, parse_config, ConfigError, ExperimentConfig};
pub use experiment::{run_experiment, ExperimentError, RunSummary};
pub use report::{Report, Status};
pub use sweep::{sweep, SweepRow};
