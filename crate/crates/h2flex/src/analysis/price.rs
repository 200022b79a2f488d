use super::AnalysisError;
use crate::formulation::{assemble_lp, Formulation, ReferenceProfile};
use crate::model::{EmissionCap, ExportSpec, Network};
use crate::solver::{solve, LpSolution, RowTag, Tolerances};
use serde::{Deserialize, Serialize};

/// Hydrogen take-off price at the (aggregated) export location.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PriceReport {
    /// Offtake-weighted average of the export-bus balance duals, EUR/MWh.
    pub take_off_price: f64,
    /// Price per snapshot, EUR/MWh.
    pub time_series_price: Vec<f64>,
    pub tau: f64,
    pub volume_q: f64,
}

/// Computes the take-off price of an optimal export solve.
///
/// The balance dual of the virtual export bus prices one extra MW drawn for
/// one snapshot; dividing by the snapshot weight converts it to EUR/MWh. With
/// the constant offtake of the export construction, the offtake-weighted
/// average equals the plain average, but the weighting is kept explicit.
pub fn take_off_price(solution: &LpSolution, formulation: &Formulation) -> Result<PriceReport, AnalysisError> {
    let handles = formulation.export.as_ref().ok_or(AnalysisError::MissingExport)?;
    if !solution.is_optimal() {
        return Err(AnalysisError::NotOptimal(solution.status));
    }
    let weight = formulation.network.snapshots.weight;
    let t_count = formulation.network.snapshots.count;
    let duals = solution.dual_ref();
    let bus = handles.virtual_bus.0 as u32;
    let mut time_series_price = vec![0.0; t_count];
    for (i, tag) in formulation.lp.row_tags.iter().enumerate() {
        if let RowTag::Balance { bus: b, t } = *tag {
            if b == bus {
                time_series_price[t as usize] = duals[i] / weight;
            }
        }
    }
    let q = handles.spec.volume_q;
    let offtake_mwh = handles.offtake_mw * weight;
    let take_off_price = time_series_price.iter().map(|p| p * offtake_mwh).sum::<f64>() / q;
    Ok(PriceReport { take_off_price, time_series_price, tau: handles.spec.tau, volume_q: q })
}

/// Finite-difference cross-check: re-solves with the volume increased by
/// `rel_step` (e.g. 0.001) and returns the implied marginal price
/// `(obj(Q + dQ) - obj(Q)) / dQ` in EUR/MWh.
pub fn finite_difference_price(
    base_objective: f64,
    network: &Network,
    spec: &ExportSpec,
    reference: Option<&ReferenceProfile>,
    cap: &EmissionCap,
    tol: &Tolerances,
    rel_step: f64,
) -> Result<f64, AnalysisError> {
    let dq = spec.volume_q * rel_step;
    let shifted = ExportSpec::new(spec.ports.clone(), spec.volume_q + dq, spec.tau)
        .map_err(|e| AnalysisError::ResolveFailed(e.to_string()))?;
    let f = assemble_lp(network, Some(&shifted), reference, cap)
        .map_err(|e| AnalysisError::ResolveFailed(e.to_string()))?;
    let sol = solve(&f.lp, tol).map_err(|e| AnalysisError::ResolveFailed(e.to_string()))?;
    let objective = sol.objective.ok_or_else(|| {
        AnalysisError::ResolveFailed(format!("shifted solve ended with status {:?}", sol.status))
    })?;
    Ok((objective - base_objective) / dq)
}
