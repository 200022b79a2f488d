use crate::solver::Tolerances;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// A delivery schedule, named or given as a numeric buffer fraction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleEntry {
    Label(String),
    Tau(f64),
}

impl ScheduleEntry {
    /// (label, tau); the four named schedules map onto the canonical buffer
    /// fractions.
    pub fn resolve(&self) -> Result<(String, f64), ConfigError> {
        match self {
            ScheduleEntry::Label(name) => {
                let tau = match name.as_str() {
                    "flexible" => 1.0,
                    "weekly" => 1.0 / 52.0,
                    "daily" => 1.0 / 365.0,
                    "stable" => 1.0 / 8760.0,
                    other => return Err(ConfigError::Invalid(format!("unknown schedule `{other}`"))),
                };
                Ok((name.clone(), tau))
            }
            ScheduleEntry::Tau(tau) => {
                if !(*tau > 0.0 && *tau <= 1.0) {
                    return Err(ConfigError::Invalid(format!("tau {tau} outside (0, 1]")));
                }
                Ok((format!("tau={tau}"), *tau))
            }
        }
    }
}

/// Scenario description: the system to load, the tau x volume study grid,
/// policy toggles and solver settings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub system: PathBuf,
    pub timeseries: PathBuf,
    pub output: PathBuf,
    /// Scenario-level WACC applied at annuitization (overrides the system
    /// default; per-component values override both).
    pub wacc: Option<f64>,
    pub volumes_mwh: Vec<f64>,
    pub schedules: Vec<ScheduleEntry>,
    #[serde(default)]
    pub temporal_matching: bool,
    pub emission_cap_tons: Option<f64>,
    /// Export ports by bus id; all `export_port` buses when empty.
    #[serde(default)]
    pub ports: Vec<String>,
    /// Worker threads for the cell matrix; 0 picks the rayon default.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_name() -> String {
    "scenario".into()
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: display.clone(), source: e })?;
        let mut config: ScenarioConfig =
            toml::from_str(&text).map_err(|e| ConfigError::Parse { path: display, message: e.to_string() })?;
        if config.name == default_name() {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                config.name = stem.to_string();
            }
        }
        // Paths are relative to the config file.
        if let Some(dir) = path.parent() {
            for p in [&mut config.system, &mut config.timeseries, &mut config.output] {
                if p.is_relative() {
                    *p = dir.join(&p);
                }
            }
        }
        config.check()?;
        Ok(config)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.volumes_mwh.is_empty() || self.schedules.is_empty() {
            return Err(ConfigError::Invalid("volumes_mwh and schedules must be non-empty".into()));
        }
        for &q in &self.volumes_mwh {
            if !(q > 0.0) || !q.is_finite() {
                return Err(ConfigError::Invalid(format!("volume {q} must be positive")));
            }
        }
        if let Some(w) = self.wacc {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(ConfigError::Invalid(format!("wacc {w} must be >= 0")));
            }
        }
        if let Some(cap) = self.emission_cap_tons {
            if !(cap >= 0.0) || !cap.is_finite() {
                return Err(ConfigError::Invalid(format!("emission cap {cap} must be >= 0")));
            }
        }
        for s in &self.schedules {
            s.resolve()?;
        }
        Ok(())
    }
}

/// FNV-1a over the canonical config serialization plus the raw bytes of the
/// system file and profile CSVs; identical inputs yield identical runs.
pub fn config_fingerprint(config: &ScenarioConfig) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    eat(serde_json::to_string(config).unwrap_or_default().as_bytes());
    for path in [
        config.system.clone(),
        config.timeseries.join("availability.csv"),
        config.timeseries.join("loads.csv"),
        config.timeseries.join("snapshots.csv"),
    ] {
        if let Ok(bytes) = std::fs::read(&path) {
            eat(&bytes);
        }
    }
    format!("{hash:016x}")
}
