use crate::model::Network;
use crate::solver::{ColTag, LpBuilder};

/// Column layout of the LP, mapping components and snapshots to indices.
///
/// Dispatch columns come first (generators, then link flows, then per store
/// charge / discharge / state of charge), followed by one capacity column per
/// extendable component. The layout is deterministic given the network.
#[derive(Clone, Debug)]
pub struct VariableIndex {
    t: usize,
    gen_dispatch: Vec<u32>,
    link_flow: Vec<u32>,
    store_charge: Vec<u32>,
    store_discharge: Vec<u32>,
    store_soc: Vec<u32>,
    gen_capacity: Vec<Option<u32>>,
    link_capacity: Vec<Option<u32>>,
    store_capacity: Vec<Option<u32>>,
    n_cols: usize,
}

impl VariableIndex {
    pub fn snapshots(&self) -> usize {
        self.t
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn gen_dispatch(&self, gen: usize, t: usize) -> u32 {
        debug_assert!(t < self.t);
        self.gen_dispatch[gen] + t as u32
    }

    pub fn link_flow(&self, link: usize, t: usize) -> u32 {
        debug_assert!(t < self.t);
        self.link_flow[link] + t as u32
    }

    pub fn store_charge(&self, store: usize, t: usize) -> u32 {
        self.store_charge[store] + t as u32
    }

    pub fn store_discharge(&self, store: usize, t: usize) -> u32 {
        self.store_discharge[store] + t as u32
    }

    pub fn store_soc(&self, store: usize, t: usize) -> u32 {
        self.store_soc[store] + t as u32
    }

    /// Capacity column of an extendable generator (built MW on top of
    /// `p_existing`).
    pub fn gen_capacity(&self, gen: usize) -> Option<u32> {
        self.gen_capacity[gen]
    }

    pub fn link_capacity(&self, link: usize) -> Option<u32> {
        self.link_capacity[link]
    }

    pub fn store_capacity(&self, store: usize) -> Option<u32> {
        self.store_capacity[store]
    }
}

/// Creates every column with its bounds: dispatch is non-negative and capped
/// by existing capacity unless the component is extendable (the cap then
/// becomes a row, added by `capacity_rows`); capacity columns range from zero
/// to the build limit. Costs are attached later by `objective_costs`.
pub fn build_variables(network: &Network) -> (VariableIndex, LpBuilder) {
    let t = network.snapshots.count;
    let mut b = LpBuilder::new();
    let inf = f64::INFINITY;

    let mut gen_dispatch = Vec::with_capacity(network.generators.len());
    for (g, gen) in network.generators.iter().enumerate() {
        gen_dispatch.push(b.n_cols() as u32);
        for ti in 0..t {
            let upper = if gen.extendable { inf } else { gen.availability[ti] * gen.p_existing };
            b.add_col(0.0, upper, 0.0, ColTag::GenDispatch { gen: g as u32, t: ti as u32 });
        }
    }

    let mut link_flow = Vec::with_capacity(network.links.len());
    for (l, link) in network.links.iter().enumerate() {
        link_flow.push(b.n_cols() as u32);
        for ti in 0..t {
            let upper = if link.extendable { inf } else { link.p_existing };
            b.add_col(0.0, upper, 0.0, ColTag::LinkFlow { link: l as u32, t: ti as u32 });
        }
    }

    let mut store_charge = Vec::with_capacity(network.stores.len());
    let mut store_discharge = Vec::with_capacity(network.stores.len());
    let mut store_soc = Vec::with_capacity(network.stores.len());
    for (s, store) in network.stores.iter().enumerate() {
        store_charge.push(b.n_cols() as u32);
        for ti in 0..t {
            b.add_col(0.0, inf, 0.0, ColTag::StoreCharge { store: s as u32, t: ti as u32 });
        }
        store_discharge.push(b.n_cols() as u32);
        for ti in 0..t {
            b.add_col(0.0, inf, 0.0, ColTag::StoreDischarge { store: s as u32, t: ti as u32 });
        }
        store_soc.push(b.n_cols() as u32);
        for ti in 0..t {
            let upper = if store.extendable { inf } else { store.e_existing };
            b.add_col(0.0, upper, 0.0, ColTag::StoreSoc { store: s as u32, t: ti as u32 });
        }
    }

    let mut gen_capacity = vec![None; network.generators.len()];
    for (g, gen) in network.generators.iter().enumerate() {
        if gen.extendable {
            let upper = gen.p_max_build.unwrap_or(inf);
            gen_capacity[g] = Some(b.add_col(0.0, upper, 0.0, ColTag::GenCapacity { gen: g as u32 }));
        }
    }
    let mut link_capacity = vec![None; network.links.len()];
    for (l, link) in network.links.iter().enumerate() {
        if link.extendable {
            link_capacity[l] = Some(b.add_col(0.0, inf, 0.0, ColTag::LinkCapacity { link: l as u32 }));
        }
    }
    let mut store_capacity = vec![None; network.stores.len()];
    for (s, store) in network.stores.iter().enumerate() {
        if store.extendable {
            store_capacity[s] = Some(b.add_col(0.0, inf, 0.0, ColTag::StoreCapacity { store: s as u32 }));
        }
    }

    let index = VariableIndex {
        t,
        gen_dispatch,
        link_flow,
        store_charge,
        store_discharge,
        store_soc,
        gen_capacity,
        link_capacity,
        store_capacity,
        n_cols: b.n_cols(),
    };
    (index, b)
}
