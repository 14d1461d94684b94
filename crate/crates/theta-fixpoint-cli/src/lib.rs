//! Config-driven harness around the `theta-fixpoint` library: parse an
//! experiment, run its mode pipeline, emit JSON/human reports and iterate
//! traces.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_experiment, ConfigError, Experiment, ExperimentEcho, Mode};
pub use report::{emit_report, emit_trace_csv, ReportFormat, RunReport, SCHEMA_VERSION};
pub use run::{run_experiment, RunError};
