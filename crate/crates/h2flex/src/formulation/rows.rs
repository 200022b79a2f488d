use super::{ReferenceProfile, VariableIndex};
use crate::model::{EmissionCap, Network};
use crate::solver::{LpBuilder, RowSense, RowTag};

/// One equality row per (bus, snapshot): generation plus link inflow (scaled
/// by efficiency) plus store discharge, minus link outflow and store charge,
/// equals the fixed load.
pub fn nodal_balance_rows(network: &Network, index: &VariableIndex, b: &mut LpBuilder) {
    let t_count = network.snapshots.count;
    let mut row_of = vec![vec![0u32; t_count]; network.buses.len()];
    for (bus, rows) in row_of.iter_mut().enumerate() {
        for (t, row) in rows.iter_mut().enumerate() {
            *row = b.add_row(RowSense::Eq, 0.0, RowTag::Balance { bus: bus as u32, t: t as u32 });
        }
    }
    for (g, gen) in network.generators.iter().enumerate() {
        for t in 0..t_count {
            b.set_coeff(row_of[gen.bus.0][t], index.gen_dispatch(g, t), 1.0);
        }
    }
    for (l, link) in network.links.iter().enumerate() {
        for t in 0..t_count {
            let flow = index.link_flow(l, t);
            b.set_coeff(row_of[link.from_bus.0][t], flow, -1.0);
            b.set_coeff(row_of[link.to_bus.0][t], flow, link.efficiency);
        }
    }
    for (s, store) in network.stores.iter().enumerate() {
        for t in 0..t_count {
            b.set_coeff(row_of[store.bus.0][t], index.store_discharge(s, t), 1.0);
            b.set_coeff(row_of[store.bus.0][t], index.store_charge(s, t), -1.0);
        }
    }
    for load in &network.loads {
        for t in 0..t_count {
            b.add_rhs(row_of[load.bus.0][t], load.profile[t]);
        }
    }
}

/// State-of-charge recursion per store and snapshot:
/// `soc_t - soc_{t-1} - w*(charge_t - discharge_t) = 0`. Cyclic stores wrap
/// `t = 0` onto the final snapshot; non-cyclic stores start empty.
pub fn storage_dynamics_rows(network: &Network, index: &VariableIndex, b: &mut LpBuilder) {
    let t_count = network.snapshots.count;
    let w = network.snapshots.weight;
    for (s, store) in network.stores.iter().enumerate() {
        for t in 0..t_count {
            let row = b.add_row(RowSense::Eq, 0.0, RowTag::StoreSoc { store: s as u32, t: t as u32 });
            if t > 0 {
                b.set_coeff(row, index.store_soc(s, t), 1.0);
                b.set_coeff(row, index.store_soc(s, t - 1), -1.0);
            } else if store.cyclic {
                // Wrapping onto itself at T = 1 forces zero net charge with a
                // free level; otherwise the recursion closes over the horizon.
                if t_count > 1 {
                    b.set_coeff(row, index.store_soc(s, t), 1.0);
                    b.set_coeff(row, index.store_soc(s, t_count - 1), -1.0);
                }
            } else {
                // Non-cyclic stores start empty.
                b.set_coeff(row, index.store_soc(s, t), 1.0);
            }
            b.set_coeff(row, index.store_charge(s, t), -w);
            b.set_coeff(row, index.store_discharge(s, t), w);
        }
    }
}

/// Couples dispatch to built capacity for extendable components:
/// `dispatch_t - avail_t * build <= avail_t * existing` for generators, and
/// the analogous rows for link flows and store state of charge.
pub fn capacity_rows(network: &Network, index: &VariableIndex, b: &mut LpBuilder) {
    let t_count = network.snapshots.count;
    for (g, gen) in network.generators.iter().enumerate() {
        let Some(cap) = index.gen_capacity(g) else { continue };
        for t in 0..t_count {
            let avail = gen.availability[t];
            let row = b.add_row(RowSense::Le, avail * gen.p_existing, RowTag::CapacityGen { gen: g as u32, t: t as u32 });
            b.set_coeff(row, index.gen_dispatch(g, t), 1.0);
            b.set_coeff(row, cap, -avail);
        }
    }
    for (l, link) in network.links.iter().enumerate() {
        let Some(cap) = index.link_capacity(l) else { continue };
        for t in 0..t_count {
            let row = b.add_row(RowSense::Le, link.p_existing, RowTag::CapacityLink { link: l as u32, t: t as u32 });
            b.set_coeff(row, index.link_flow(l, t), 1.0);
            b.set_coeff(row, cap, -1.0);
        }
    }
    for (s, store) in network.stores.iter().enumerate() {
        let Some(cap) = index.store_capacity(s) else { continue };
        for t in 0..t_count {
            let row = b.add_row(RowSense::Le, store.e_existing, RowTag::CapacityStore { store: s as u32, t: t as u32 });
            b.set_coeff(row, index.store_soc(s, t), 1.0);
            b.set_coeff(row, cap, -1.0);
        }
    }
}

/// One inequality per month present in the snapshot set: electrolyzer
/// electricity input beyond its reference must be covered by renewable
/// generation beyond its reference, with no spatial restriction.
pub fn temporal_matching_rows(
    network: &Network,
    index: &VariableIndex,
    reference: &ReferenceProfile,
    b: &mut LpBuilder,
) {
    let w = network.snapshots.weight;
    let months = network.snapshots.months();
    for &month in &months {
        let m = month as usize - 1;
        let rhs = reference.electrolyzer_mwh[m] - reference.res_mwh[m];
        let row = b.add_row(RowSense::Le, rhs, RowTag::Matching { month });
        for t in 0..network.snapshots.count {
            if network.snapshots.month_index[t] != month {
                continue;
            }
            for (l, link) in network.links.iter().enumerate() {
                if link.electrolyzer {
                    b.set_coeff(row, index.link_flow(l, t), w);
                }
            }
            for (g, gen) in network.generators.iter().enumerate() {
                if network.carrier(gen.carrier).renewable {
                    b.set_coeff(row, index.gen_dispatch(g, t), -w);
                }
            }
        }
    }
}

/// A single row capping CO2: generator dispatch weighted by snapshot hours
/// and the carrier emission factor. Fuel burned by conversion links is
/// counted at its source generator, so links carry no coefficient.
pub fn emission_cap_row(network: &Network, index: &VariableIndex, cap: &EmissionCap, b: &mut LpBuilder) {
    let Some(limit) = cap.limit else { return };
    let w = network.snapshots.weight;
    let row = b.add_row(RowSense::Le, limit, RowTag::Emission);
    for (g, gen) in network.generators.iter().enumerate() {
        let co2 = network.carrier(gen.carrier).co2_factor;
        if co2 > 0.0 {
            for t in 0..network.snapshots.count {
                b.set_coeff(row, index.gen_dispatch(g, t), w * co2);
            }
        }
    }
}

/// Objective: dispatch priced at marginal cost times snapshot hours, built
/// capacity at its annualized cost. Stores and fictional components have no
/// dispatch cost.
pub fn objective_costs(network: &Network, index: &VariableIndex, b: &mut LpBuilder) {
    let w = network.snapshots.weight;
    for (g, gen) in network.generators.iter().enumerate() {
        if gen.marginal_cost != 0.0 {
            for t in 0..network.snapshots.count {
                b.set_cost(index.gen_dispatch(g, t), gen.marginal_cost * w);
            }
        }
        if let Some(cap) = index.gen_capacity(g) {
            b.set_cost(cap, gen.capex_annual);
        }
    }
    for (l, link) in network.links.iter().enumerate() {
        if link.marginal_cost != 0.0 {
            for t in 0..network.snapshots.count {
                b.set_cost(index.link_flow(l, t), link.marginal_cost * w);
            }
        }
        if let Some(cap) = index.link_capacity(l) {
            b.set_cost(cap, link.capex_annual);
        }
    }
    for (s, store) in network.stores.iter().enumerate() {
        if let Some(cap) = index.store_capacity(s) {
            b.set_cost(cap, store.capex_annual);
        }
    }
}
