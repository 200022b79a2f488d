use super::AnalysisError;
use crate::formulation::Formulation;
use crate::solver::LpSolution;
use serde::{Deserialize, Serialize};

/// Export delivery schedule: the power fed from the ports into the virtual
/// export bus, per snapshot.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeliverySchedule {
    pub feed_mw: Vec<f64>,
    pub mean_mw: f64,
    pub max_mw: f64,
    /// Population variance of the per-snapshot feed, (MW)^2.
    pub variance: f64,
    /// Integral of the schedule; equals the export volume for any feasible
    /// solution.
    pub total_mwh: f64,
}

/// Reads the port feed-in series of an optimal export solve.
pub fn delivery_schedule(solution: &LpSolution, formulation: &Formulation) -> Result<DeliverySchedule, AnalysisError> {
    let handles = formulation.export.as_ref().ok_or(AnalysisError::MissingExport)?;
    if !solution.is_optimal() {
        return Err(AnalysisError::NotOptimal(solution.status));
    }
    let t_count = formulation.network.snapshots.count;
    let weight = formulation.network.snapshots.weight;
    let x = solution.primal_ref();
    let mut feed_mw = vec![0.0; t_count];
    for link in &handles.feed_links {
        for (t, feed) in feed_mw.iter_mut().enumerate() {
            *feed += x[formulation.index.link_flow(link.0, t) as usize];
        }
    }
    let mean_mw = feed_mw.iter().sum::<f64>() / t_count as f64;
    let max_mw = feed_mw.iter().fold(0.0f64, |m, &v| m.max(v));
    let variance = feed_mw.iter().map(|v| (v - mean_mw).powi(2)).sum::<f64>() / t_count as f64;
    let total_mwh = mean_mw * t_count as f64 * weight;
    Ok(DeliverySchedule { feed_mw, mean_mw, max_mw, variance, total_mwh })
}
