use super::BusId;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Export demand description: total annual volume `Q`, the delivery
/// flexibility fraction `tau`, and the hydrogen buses that feed the export.
///
/// `tau` sizes the buffer between production and the contracted offtake:
/// 1 is fully flexible, 1/52 a weekly buffer, 1/365 daily, 1/8760 stable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExportSpec {
    pub ports: Vec<BusId>,
    /// Total export volume over the horizon, MWh.
    pub volume_q: f64,
    /// Buffer fraction in (0, 1].
    pub tau: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ExportSpecError {
    #[error("tau must lie in (0, 1], got {0}")]
    TauOutOfRange(f64),
    #[error("export volume must be positive, got {0}")]
    NonPositiveVolume(f64),
    #[error("export requires at least one port")]
    NoPorts,
}

impl ExportSpec {
    pub fn new(ports: Vec<BusId>, volume_q: f64, tau: f64) -> Result<Self, ExportSpecError> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(ExportSpecError::TauOutOfRange(tau));
        }
        if !(volume_q > 0.0) || !volume_q.is_finite() {
            return Err(ExportSpecError::NonPositiveVolume(volume_q));
        }
        if ports.is_empty() {
            return Err(ExportSpecError::NoPorts);
        }
        Ok(Self { ports, volume_q, tau })
    }
}

/// Energy capacity of the delivery buffer: `tau * Q` MWh.
pub fn buffer_capacity(spec: &ExportSpec) -> f64 {
    spec.tau * spec.volume_q
}

/// Annual CO2 budget in tons; `None` disables the cap.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EmissionCap {
    pub limit: Option<f64>,
}

impl EmissionCap {
    pub fn disabled() -> Self {
        Self { limit: None }
    }

    pub fn tons(limit: f64) -> Self {
        Self { limit: Some(limit) }
    }
}
