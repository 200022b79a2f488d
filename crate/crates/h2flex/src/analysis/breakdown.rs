use super::AnalysisError;
use crate::formulation::Formulation;
use crate::solver::LpSolution;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Cost change of one technology class between the export run and the
/// reference run, split into capital and operational parts.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ClassDelta {
    pub capex_delta: f64,
    pub opex_delta: f64,
    /// Deltas normalized by the exported volume, EUR/MWh.
    pub capex_per_mwh: f64,
    pub opex_per_mwh: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub classes: BTreeMap<String, ClassDelta>,
    pub objective_export: f64,
    pub objective_reference: f64,
    /// Sum of all class deltas; equals the objective difference.
    pub total_delta: f64,
    pub volume_q: f64,
}

/// Attributes the system-cost increase of the export run to technology
/// classes: `capex_annual * (built_export - built_ref)` and
/// `marginal_cost * weight * (dispatch_export - dispatch_ref)` summed per
/// class. The virtual export components are costless and excluded.
pub fn cost_breakdown(
    export_solution: &LpSolution,
    export_formulation: &Formulation,
    reference_solution: &LpSolution,
    reference_formulation: &Formulation,
) -> Result<CostBreakdown, AnalysisError> {
    if !export_solution.is_optimal() {
        return Err(AnalysisError::NotOptimal(export_solution.status));
    }
    if !reference_solution.is_optimal() {
        return Err(AnalysisError::NotOptimal(reference_solution.status));
    }
    let en = &export_formulation.network;
    let rn = &reference_formulation.network;
    if en.snapshots.count != rn.snapshots.count || en.snapshots.weight != rn.snapshots.weight {
        return Err(AnalysisError::SnapshotMismatch);
    }
    let q = export_formulation.export.as_ref().map(|h| h.spec.volume_q).unwrap_or(1.0);
    let t_count = en.snapshots.count;
    let w = en.snapshots.weight;
    let xe = export_solution.primal_ref();
    let xr = reference_solution.primal_ref();
    let ei = &export_formulation.index;
    let ri = &reference_formulation.index;

    let mut classes: BTreeMap<String, ClassDelta> = BTreeMap::new();
    let mut add = |class: &str, capex: f64, opex: f64| {
        let entry = classes.entry(class.to_string()).or_default();
        entry.capex_delta += capex;
        entry.opex_delta += opex;
    };

    // The reference components are a prefix of the expanded export network;
    // anything beyond them is virtual and costless.
    for (g, gen) in rn.generators.iter().enumerate() {
        let built_e = ei.gen_capacity(g).map(|c| xe[c as usize]).unwrap_or(0.0);
        let built_r = ri.gen_capacity(g).map(|c| xr[c as usize]).unwrap_or(0.0);
        let dispatch_e: f64 = (0..t_count).map(|t| xe[ei.gen_dispatch(g, t) as usize]).sum();
        let dispatch_r: f64 = (0..t_count).map(|t| xr[ri.gen_dispatch(g, t) as usize]).sum();
        add(
            &gen.tech_class,
            gen.capex_annual * (built_e - built_r),
            gen.marginal_cost * w * (dispatch_e - dispatch_r),
        );
    }
    for (l, link) in rn.links.iter().enumerate() {
        let built_e = ei.link_capacity(l).map(|c| xe[c as usize]).unwrap_or(0.0);
        let built_r = ri.link_capacity(l).map(|c| xr[c as usize]).unwrap_or(0.0);
        let flow_e: f64 = (0..t_count).map(|t| xe[ei.link_flow(l, t) as usize]).sum();
        let flow_r: f64 = (0..t_count).map(|t| xr[ri.link_flow(l, t) as usize]).sum();
        add(
            &link.tech_class,
            link.capex_annual * (built_e - built_r),
            link.marginal_cost * w * (flow_e - flow_r),
        );
    }
    for (s, st) in rn.stores.iter().enumerate() {
        let built_e = ei.store_capacity(s).map(|c| xe[c as usize]).unwrap_or(0.0);
        let built_r = ri.store_capacity(s).map(|c| xr[c as usize]).unwrap_or(0.0);
        add(&st.tech_class, st.capex_annual * (built_e - built_r), 0.0);
    }

    for delta in classes.values_mut() {
        delta.capex_per_mwh = delta.capex_delta / q;
        delta.opex_per_mwh = delta.opex_delta / q;
    }
    let total_delta: f64 = classes.values().map(|d| d.capex_delta + d.opex_delta).sum();
    Ok(CostBreakdown {
        classes,
        objective_export: export_solution.objective.unwrap(),
        objective_reference: reference_solution.objective.unwrap(),
        total_delta,
        volume_q: q,
    })
}
