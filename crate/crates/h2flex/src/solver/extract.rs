use super::problem::{LpError, LpProblem, LpSolution, RowTag};
use std::collections::BTreeMap;

/// Row duals grouped by structural role.
#[derive(Clone, Debug, Default)]
pub struct TaggedDuals {
    /// (bus, snapshot) -> dual of the nodal balance row.
    pub balance: BTreeMap<(u32, u32), f64>,
    /// (store, snapshot) -> dual of the state-of-charge row.
    pub soc: BTreeMap<(u32, u32), f64>,
    /// (component, snapshot) -> dual of the capacity coupling row.
    pub capacity_gen: BTreeMap<(u32, u32), f64>,
    pub capacity_link: BTreeMap<(u32, u32), f64>,
    pub capacity_store: BTreeMap<(u32, u32), f64>,
    /// month -> dual of the renewable matching row.
    pub matching: BTreeMap<u8, f64>,
    pub emission: Option<f64>,
}

/// Groups the duals of an optimal solution by row kind.
pub fn extract_duals(solution: &LpSolution, problem: &LpProblem) -> Result<TaggedDuals, LpError> {
    if !solution.is_optimal() {
        return Err(LpError::NotOptimal(solution.status));
    }
    let duals = solution.dual_ref();
    let mut out = TaggedDuals::default();
    for (i, tag) in problem.row_tags.iter().enumerate() {
        let y = duals[i];
        match *tag {
            RowTag::Balance { bus, t } => {
                out.balance.insert((bus, t), y);
            }
            RowTag::StoreSoc { store, t } => {
                out.soc.insert((store, t), y);
            }
            RowTag::CapacityGen { gen, t } => {
                out.capacity_gen.insert((gen, t), y);
            }
            RowTag::CapacityLink { link, t } => {
                out.capacity_link.insert((link, t), y);
            }
            RowTag::CapacityStore { store, t } => {
                out.capacity_store.insert((store, t), y);
            }
            RowTag::Matching { month } => {
                out.matching.insert(month, y);
            }
            RowTag::Emission => out.emission = Some(y),
            RowTag::Other => {}
        }
    }
    Ok(out)
}
