//! Scenario files, presets, runs and reports.

mod load;
mod presets;
mod report;
mod run;
pub mod schema;

pub use load::{
    load_scenario, load_scenario_str, parse_scenario_file, Body, Scenario, DEFAULT_INTERMEDIATE_TIME,
    DEFAULT_POSTSELECTION_TIME, DEFAULT_PREPARATION_TIME, DEFAULT_SAMPLES,
};
pub use presets::{preset, preset_names};
pub use report::{emit_report, format_number, parse_json_report, Format, Report, Table, SIGNIFICANT_DIGITS};
pub use run::run_scenario;
pub use schema::{Kind, ScenarioFile};
