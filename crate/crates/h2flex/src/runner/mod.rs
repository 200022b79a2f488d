//! Scenario orchestration: system/config ingestion, the two-stage workflow
//! (reference solve, then the tau x volume export matrix) and report files.

mod config;
mod matrix;
mod report;
mod system;

pub use config::{config_fingerprint, ConfigError, ScenarioConfig, ScheduleEntry};
pub use matrix::{
    emissions_of, run_cell, run_matrix, run_reference, CellReport, ReferenceRun, ReferenceSummary,
    RunArtifact, RunError, TOOL_VERSION,
};
pub use report::{cell_stem, read_artifact, render_breakdown_csv, render_summary_csv, write_artifact};
pub use system::{
    load_profiles, load_system, resolve, BusSpec, CarrierSpec, CostSpec, GeneratorSpec, LinkSpec,
    LoadSpec, ProfileSet, SnapshotSpec, StoreSpec, SystemError, SystemSpec,
};
