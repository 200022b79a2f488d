//! Translation of a [`Network`](crate::model::Network) plus export and policy
//! settings into a sparse LP.
//!
//! The export feature is formulated through components rather than a bespoke
//! algebraic row: the ports feed a virtual export bus over lossless,
//! uncapacitated links; a costless cyclic buffer store of energy capacity
//! `tau * Q` sits on that bus; and a constant offtake load draws
//! `Q / horizon` MW. Cyclic closure of the buffer forces total delivery to
//! equal `Q`, while the buffer bounds confine cumulative feed-in to a
//! `tau * Q` band around the uniform offtake — exactly the four delivery
//! schedules when `tau` is 1, 1/52, 1/365 or 1/8760.

mod export;
mod rows;
mod variables;

pub use export::{apply_export, ExportHandles};
pub use rows::{
    capacity_rows, emission_cap_row, nodal_balance_rows, objective_costs, storage_dynamics_rows,
    temporal_matching_rows,
};
pub use variables::{build_variables, VariableIndex};

use crate::model::{EmissionCap, ExportSpec, Network};
use crate::solver::{LpError, LpProblem};
use thiserror::Error;

/// Monthly electrolyzer consumption and renewable generation of the
/// pre-export reference run, in MWh, indexed by `month - 1`.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReferenceProfile {
    pub electrolyzer_mwh: [f64; 12],
    pub res_mwh: [f64; 12],
}

impl ReferenceProfile {
    /// Aggregates a solved primal vector into the monthly reference totals.
    pub fn from_primal(network: &Network, index: &VariableIndex, primal: &[f64]) -> Self {
        let w = network.snapshots.weight;
        let mut out = ReferenceProfile::default();
        for t in 0..network.snapshots.count {
            let month = network.snapshots.month_index[t] as usize - 1;
            for (l, link) in network.links.iter().enumerate() {
                if link.electrolyzer {
                    out.electrolyzer_mwh[month] += w * primal[index.link_flow(l, t) as usize];
                }
            }
            for (g, gen) in network.generators.iter().enumerate() {
                if network.carrier(gen.carrier).renewable {
                    out.res_mwh[month] += w * primal[index.gen_dispatch(g, t) as usize];
                }
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum FormulationError {
    #[error("network failed validation with {0} violation(s); run validate for details")]
    InvalidNetwork(usize),
    #[error("export spec rejected: {0}")]
    Export(#[from] crate::model::ExportSpecError),
    #[error("export port bus #{0} is not flagged export_port")]
    PortNotMarked(usize),
    #[error("lp assembly failed: {0}")]
    Lp(#[from] LpError),
}

/// A fully assembled LP together with the expanded network and the handles
/// needed to read export quantities back out of a solution.
#[derive(Clone, Debug)]
pub struct Formulation {
    pub lp: LpProblem,
    pub index: VariableIndex,
    /// The network the LP describes: the input network, plus the virtual
    /// export components when an export spec was given.
    pub network: Network,
    pub export: Option<ExportHandles>,
}

/// Builds the complete LP: variables, balances, storage dynamics, capacity
/// coupling, optional monthly matching (requires the reference profile) and
/// optional emission cap.
///
/// Expects a validated network; the export expansion is applied internally.
pub fn assemble_lp(
    network: &Network,
    export: Option<&ExportSpec>,
    reference: Option<&ReferenceProfile>,
    cap: &EmissionCap,
) -> Result<Formulation, FormulationError> {
    let (network, handles) = match export {
        Some(spec) => {
            let (expanded, handles) = apply_export(network, spec)?;
            (expanded, Some(handles))
        }
        None => (network.clone(), None),
    };

    let (index, mut builder) = build_variables(&network);
    nodal_balance_rows(&network, &index, &mut builder);
    storage_dynamics_rows(&network, &index, &mut builder);
    capacity_rows(&network, &index, &mut builder);
    if let Some(reference) = reference {
        temporal_matching_rows(&network, &index, reference, &mut builder);
    }
    emission_cap_row(&network, &index, cap, &mut builder);
    objective_costs(&network, &index, &mut builder);
    let lp = builder.finish()?;
    Ok(Formulation { lp, index, network, export: handles })
}
