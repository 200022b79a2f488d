use super::FormulationError;
use crate::model::{buffer_capacity, Bus, BusId, ExportSpec, Link, LinkId, Load, LoadId, Network, Store, StoreId};

/// Handles into the virtual export components added by [`apply_export`].
#[derive(Clone, Debug)]
pub struct ExportHandles {
    pub virtual_bus: BusId,
    /// One feed link per port, in port order.
    pub feed_links: Vec<LinkId>,
    pub buffer_store: StoreId,
    pub offtake_load: LoadId,
    /// Constant offtake in MW: `Q / (T * weight)`.
    pub offtake_mw: f64,
    pub spec: ExportSpec,
}

/// Expands the network with the export construction: a virtual export bus,
/// one lossless uncapacitated feed link per port (ports are aggregated, so a
/// single delivery constraint governs all of them), a costless cyclic buffer
/// store of capacity `tau * Q`, and a constant offtake load that integrates
/// to `Q` over the horizon.
///
/// The expanded network is internal to the formulation: the feed links carry
/// an infinite capacity, which user-facing networks may not.
pub fn apply_export(network: &Network, spec: &ExportSpec) -> Result<(Network, ExportHandles), FormulationError> {
    // Re-run the constructor checks so hand-built specs are covered too.
    let spec = ExportSpec::new(spec.ports.clone(), spec.volume_q, spec.tau)?;
    for &port in &spec.ports {
        let ok = network.buses.get(port.0).map(|b| b.export_port).unwrap_or(false);
        if !ok {
            return Err(FormulationError::PortNotMarked(port.0));
        }
    }

    let mut expanded = network.clone();
    let carrier = expanded.buses[spec.ports[0].0].carrier;
    let virtual_bus = BusId(expanded.buses.len());
    expanded.buses.push(Bus { id: "__export".into(), carrier, export_port: false });

    let mut feed_links = Vec::with_capacity(spec.ports.len());
    for &port in &spec.ports {
        let id = LinkId(expanded.links.len());
        expanded.links.push(Link {
            id: format!("__export_feed_{}", network.buses[port.0].id),
            from_bus: port,
            to_bus: virtual_bus,
            efficiency: 1.0,
            p_existing: f64::INFINITY,
            extendable: false,
            capex_annual: 0.0,
            marginal_cost: 0.0,
            electrolyzer: false,
            tech_class: "export-virtual".into(),
        });
        feed_links.push(id);
    }

    let buffer_store = StoreId(expanded.stores.len());
    expanded.stores.push(Store {
        id: "__export_buffer".into(),
        bus: virtual_bus,
        e_existing: buffer_capacity(&spec),
        extendable: false,
        capex_annual: 0.0,
        cyclic: true,
        fictional: true,
        tech_class: "export-virtual".into(),
    });

    let offtake_mw = spec.volume_q / network.snapshots.horizon_hours();
    let offtake_load = LoadId(expanded.loads.len());
    expanded.loads.push(Load {
        id: "__export_offtake".into(),
        bus: virtual_bus,
        profile: vec![offtake_mw; network.snapshots.count],
        sector: "export".into(),
    });

    let handles =
        ExportHandles { virtual_bus, feed_links, buffer_store, offtake_load, offtake_mw, spec };
    Ok((expanded, handles))
}
