//! Report emission: `artifact.json` with the full [`RunArtifact`], a one-line
//! per cell `report.csv`, a per-class `breakdown.csv`, and one schedule series
//! CSV per cell. Output is byte-deterministic for identical inputs: no
//! timestamps, stable orderings, shortest-round-trip float formatting.

use super::matrix::{RunArtifact, RunError};
use std::fmt::Write as _;
use std::path::Path;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.display().to_string(), source }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v}")).unwrap_or_default()
}

/// The `report.csv` body: one row per cell.
pub fn render_summary_csv(artifact: &RunArtifact) -> String {
    let mut out = String::new();
    out.push_str(
        "tau_label,tau,volume_mwh,status,objective_eur,additional_cost_eur_per_mwh,take_off_price_eur_per_mwh,\
         schedule_mean_mw,schedule_max_mw,schedule_variance_mw2,verification_passed\n",
    );
    for cell in &artifact.cells {
        let price = cell.price.as_ref().map(|p| p.take_off_price);
        let (mean, max, var) = match &cell.schedule {
            Some(s) => (Some(s.mean_mw), Some(s.max_mw), Some(s.variance)),
            None => (None, None, None),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            cell.tau_label,
            cell.tau,
            cell.volume_mwh,
            cell.status,
            fmt_opt(cell.objective),
            fmt_opt(cell.additional_cost_per_mwh),
            fmt_opt(price),
            fmt_opt(mean),
            fmt_opt(max),
            fmt_opt(var),
            cell.verification_passed,
        );
    }
    out
}

/// The `breakdown.csv` body: one row per (cell, technology class).
pub fn render_breakdown_csv(artifact: &RunArtifact) -> String {
    let mut out = String::new();
    out.push_str("tau_label,volume_mwh,class,capex_delta_eur,opex_delta_eur,capex_eur_per_mwh,opex_eur_per_mwh\n");
    for cell in &artifact.cells {
        let Some(breakdown) = &cell.breakdown else { continue };
        for (class, delta) in &breakdown.classes {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                cell.tau_label, cell.volume_mwh, class, delta.capex_delta, delta.opex_delta, delta.capex_per_mwh, delta.opex_per_mwh,
            );
        }
    }
    out
}

/// Stable file stem for one cell: schedule label plus volume.
pub fn cell_stem(tau_label: &str, volume_mwh: f64) -> String {
    let label: String = tau_label.chars().map(|c| if c.is_alphanumeric() { c } else { '_' }).collect();
    format!("{label}_{volume_mwh}")
}

fn render_schedule_csv(schedule: &crate::analysis::DeliverySchedule) -> String {
    let mut out = String::with_capacity(schedule.feed_mw.len() * 16);
    out.push_str("snapshot,feed_mw\n");
    for (t, feed) in schedule.feed_mw.iter().enumerate() {
        let _ = writeln!(out, "{t},{feed}");
    }
    out
}

/// Writes every report file for a finished run into `dir`.
pub fn write_artifact(dir: &Path, artifact: &RunArtifact) -> Result<(), RunError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let artifact_path = dir.join("artifact.json");
    let json = serde_json::to_string_pretty(artifact).expect("artifact serializes");
    std::fs::write(&artifact_path, json).map_err(io_err(&artifact_path))?;

    let report_path = dir.join("report.csv");
    std::fs::write(&report_path, render_summary_csv(artifact)).map_err(io_err(&report_path))?;
    let breakdown_path = dir.join("breakdown.csv");
    std::fs::write(&breakdown_path, render_breakdown_csv(artifact)).map_err(io_err(&breakdown_path))?;

    let schedules_dir = dir.join("schedules");
    std::fs::create_dir_all(&schedules_dir).map_err(io_err(&schedules_dir))?;
    for cell in &artifact.cells {
        if let Some(schedule) = &cell.schedule {
            let path = schedules_dir.join(format!("{}.csv", cell_stem(&cell.tau_label, cell.volume_mwh)));
            std::fs::write(&path, render_schedule_csv(schedule)).map_err(io_err(&path))?;
        }
    }
    Ok(())
}

/// Loads an artifact from a run directory or directly from a JSON file.
pub fn read_artifact(path: &Path) -> Result<RunArtifact, RunError> {
    let file = if path.is_dir() { path.join("artifact.json") } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&file).map_err(io_err(&file))?;
    serde_json::from_str(&text).map_err(|e| RunError::Io {
        path: file.display().to_string(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })
}
