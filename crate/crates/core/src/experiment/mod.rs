//! Experiment configuration, repeated runs and report emission.

mod config;
mod report;
mod run;
mod targets;

pub use config::{
    budget_from_pct, parse_config, parse_config_str, AttackSpec, DatasetSpec, ExperimentConfig,
    Method, OutputFormat, PlantedSpec, ScaleKind, TargetSelector,
};
pub use report::{
    emit_report, summarize, summary_path, write_csv, write_json, write_summary_csv, SummaryRow,
    CSV_HEADER,
};
pub use run::{run_experiment, run_experiment_on, run_once, sort_rows, ResultRow, RunOutcome};
pub use targets::{select_community, select_node};
