//! Experiment harness for the parameter-free learning automaton: replicated
//! benchmark runs with deterministic aggregation, the standard
//! resolution/perturbation tuning procedure for comparison schemes, and
//! CSV/JSON report emission.

pub mod cli;
pub mod experiment;
pub mod report;
pub mod tuner;

pub use experiment::{
    relative_improvement, run_experiment, run_experiment_serial, suite_configs, ExperimentConfig,
    ExperimentReport, HarnessError,
};
pub use report::{
    csv_without_wall_time, emit_report, parse_json_reports, write_reports, ReportError,
    ReportFormat, CSV_HEADER,
};
pub use tuner::{
    default_gamma_range, tune_gamma_grid, tune_resolution, GridOutcome, SyntheticScheme,
    TunableScheme, TuneError, TuneOutcome, TuneParams,
};
