use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub struct $name(pub usize);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(CarrierId);
id_type!(BusId);
id_type!(GeneratorId);
id_type!(LinkId);
id_type!(StoreId);
id_type!(LoadId);

/// An energy carrier (electricity, hydrogen, gas, ...).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Carrier {
    pub name: String,
    /// tCO2 emitted per MWh supplied by generators of this carrier.
    pub co2_factor: f64,
    /// Membership in the renewable set used by the temporal-matching policy.
    pub renewable: bool,
}

/// The shared time axis: `count` snapshots of uniform `weight` hours each,
/// labelled with a calendar month in `1..=12`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnapshotSet {
    pub count: usize,
    /// Hours represented by one snapshot (e.g. 3.0).
    pub weight: f64,
    /// Calendar month per snapshot, non-decreasing over a single year.
    pub month_index: Vec<u8>,
}

impl SnapshotSet {
    pub fn new(count: usize, weight: f64, month_index: Vec<u8>) -> Self {
        Self { count, weight, month_index }
    }

    /// Uniform month labels for horizons that do not span a calendar year.
    pub fn single_month(count: usize, weight: f64) -> Self {
        Self { count, weight, month_index: vec![1; count] }
    }

    /// Total modeled hours.
    pub fn horizon_hours(&self) -> f64 {
        self.count as f64 * self.weight
    }

    /// Months actually present, in ascending order.
    pub fn months(&self) -> Vec<u8> {
        let mut months: Vec<u8> = self.month_index.clone();
        months.dedup();
        months
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bus {
    pub id: String,
    pub carrier: CarrierId,
    /// Hydrogen buses only: marks a feed-in point for export delivery.
    pub export_port: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub bus: BusId,
    pub carrier: CarrierId,
    /// Installed capacity in MW.
    pub p_existing: f64,
    pub extendable: bool,
    /// Cap on newly built capacity; `None` means unbounded.
    pub p_max_build: Option<f64>,
    /// EUR per MW of built capacity per year.
    pub capex_annual: f64,
    /// EUR per MWh dispatched.
    pub marginal_cost: f64,
    /// Per-unit availability in [0, 1], one entry per snapshot.
    pub availability: Vec<f64>,
    pub tech_class: String,
}

/// Directed energy transfer: transport (efficiency close to 1) or conversion
/// between carriers. Flow and capacity are measured on the input side.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub from_bus: BusId,
    pub to_bus: BusId,
    /// Output per unit of input, in (0, 1].
    pub efficiency: f64,
    pub p_existing: f64,
    pub extendable: bool,
    pub capex_annual: f64,
    /// EUR per MWh of input.
    pub marginal_cost: f64,
    /// Electricity-to-hydrogen conversion; drives the matching policy.
    pub electrolyzer: bool,
    pub tech_class: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Store {
    pub id: String,
    pub bus: BusId,
    /// Installed energy capacity in MWh.
    pub e_existing: f64,
    pub extendable: bool,
    /// EUR per MWh of built capacity per year.
    pub capex_annual: f64,
    /// Cyclic stores close the state of charge over the horizon.
    pub cyclic: bool,
    /// Export buffer construct: costless, non-extendable, excluded from reports.
    pub fictional: bool,
    pub tech_class: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Load {
    pub id: String,
    pub bus: BusId,
    /// MW drawn per snapshot.
    pub profile: Vec<f64>,
    pub sector: String,
}

/// Immutable system description shared read-only by all scenario solves.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Network {
    pub carriers: Vec<Carrier>,
    pub snapshots: SnapshotSet,
    pub buses: Vec<Bus>,
    pub generators: Vec<Generator>,
    pub links: Vec<Link>,
    pub stores: Vec<Store>,
    pub loads: Vec<Load>,
}

/// One structural defect found by [`Network::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// `"generator wind_n"`, `"bus north"`, ...
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

impl Network {
    pub fn carrier(&self, id: CarrierId) -> &Carrier {
        &self.carriers[id.0]
    }

    pub fn bus(&self, id: BusId) -> &Bus {
        &self.buses[id.0]
    }

    pub fn bus_by_name(&self, name: &str) -> Option<BusId> {
        self.buses.iter().position(|b| b.id == name).map(BusId)
    }

    pub fn carrier_by_name(&self, name: &str) -> Option<CarrierId> {
        self.carriers.iter().position(|c| c.name == name).map(CarrierId)
    }

    pub fn export_ports(&self) -> Vec<BusId> {
        (0..self.buses.len()).map(BusId).filter(|&b| self.buses[b.0].export_port).collect()
    }

    fn is_hydrogen_bus(&self, bus: BusId) -> bool {
        self.buses
            .get(bus.0)
            .map(|b| {
                self.carriers
                    .get(b.carrier.0)
                    .map(|c| c.name.eq_ignore_ascii_case("hydrogen") || c.name.eq_ignore_ascii_case("h2"))
                    .unwrap_or(false)
            })
            .unwrap_or(false)
    }

    /// Reports every violated invariant; an empty report means well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let t = self.snapshots.count;
        let push = |out: &mut Vec<Violation>, subject: String, message: String| {
            out.push(Violation { subject, message });
        };

        if t == 0 {
            push(&mut out, "snapshots".into(), "snapshot count must be >= 1".into());
        }
        if !(self.snapshots.weight > 0.0) || !self.snapshots.weight.is_finite() {
            push(&mut out, "snapshots".into(), format!("weight must be a positive finite number of hours, got {}", self.snapshots.weight));
        }
        if self.snapshots.month_index.len() != t {
            push(&mut out, "snapshots".into(), format!("month_index has {} entries, expected {}", self.snapshots.month_index.len(), t));
        } else {
            let mut prev = 0u8;
            for (i, &m) in self.snapshots.month_index.iter().enumerate() {
                if !(1..=12).contains(&m) {
                    push(&mut out, "snapshots".into(), format!("month_index[{i}] = {m} outside 1..=12"));
                    break;
                }
                if m < prev {
                    push(&mut out, "snapshots".into(), format!("month_index decreases at snapshot {i} ({prev} -> {m})"));
                    break;
                }
                prev = m;
            }
        }

        let mut seen = std::collections::BTreeSet::new();
        for c in &self.carriers {
            if !seen.insert(c.name.clone()) {
                push(&mut out, format!("carrier {}", c.name), "duplicate carrier name".into());
            }
            if !c.co2_factor.is_finite() || c.co2_factor < 0.0 {
                push(&mut out, format!("carrier {}", c.name), format!("co2_factor must be finite and >= 0, got {}", c.co2_factor));
            }
        }

        let mut seen = std::collections::BTreeSet::new();
        for (i, b) in self.buses.iter().enumerate() {
            if !seen.insert(b.id.clone()) {
                push(&mut out, format!("bus {}", b.id), "duplicate bus id".into());
            }
            if b.carrier.0 >= self.carriers.len() {
                push(&mut out, format!("bus {}", b.id), format!("dangling reference: carrier #{}", b.carrier));
            }
            if b.export_port && !self.is_hydrogen_bus(BusId(i)) {
                push(&mut out, format!("bus {}", b.id), "export_port requires a hydrogen carrier".into());
            }
        }

        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        for g in &self.generators {
            let subject = format!("generator {}", g.id);
            if g.bus.0 >= self.buses.len() {
                push(&mut out, subject.clone(), format!("dangling reference: bus #{}", g.bus));
            }
            if g.carrier.0 >= self.carriers.len() {
                push(&mut out, subject.clone(), format!("dangling reference: carrier #{}", g.carrier));
            }
            if g.availability.len() != t {
                push(&mut out, subject.clone(), format!("availability profile has {} entries, expected {}", g.availability.len(), t));
            }
            if let Some(bad) = g.availability.iter().position(|&a| !(0.0..=1.0).contains(&a) || !a.is_finite()) {
                push(&mut out, subject.clone(), format!("profile out of [0,1] at snapshot {bad} (value {})", g.availability[bad]));
            }
            if !finite_nonneg(g.p_existing) || !finite_nonneg(g.capex_annual) || !finite_nonneg(g.marginal_cost) {
                push(&mut out, subject.clone(), "p_existing, capex_annual and marginal_cost must be finite and >= 0".into());
            }
            if let Some(m) = g.p_max_build {
                if !finite_nonneg(m) {
                    push(&mut out, subject, format!("p_max_build must be finite and >= 0, got {m}"));
                }
            }
        }

        for l in &self.links {
            let subject = format!("link {}", l.id);
            if l.from_bus.0 >= self.buses.len() || l.to_bus.0 >= self.buses.len() {
                push(&mut out, subject.clone(), "dangling reference: bus".into());
                continue;
            }
            if l.from_bus == l.to_bus {
                push(&mut out, subject.clone(), "from_bus and to_bus must differ".into());
            }
            if !(l.efficiency > 0.0 && l.efficiency <= 1.0) {
                push(&mut out, subject.clone(), format!("efficiency must be in (0,1], got {}", l.efficiency));
            }
            if !finite_nonneg(l.p_existing) || !finite_nonneg(l.capex_annual) || !finite_nonneg(l.marginal_cost) {
                push(&mut out, subject.clone(), "p_existing, capex_annual and marginal_cost must be finite and >= 0".into());
            }
            if l.electrolyzer {
                let from_h2 = self.is_hydrogen_bus(l.from_bus);
                let to_h2 = self.is_hydrogen_bus(l.to_bus);
                if from_h2 || !to_h2 {
                    push(&mut out, subject, "electrolyzer must convert a non-hydrogen bus into a hydrogen bus".into());
                }
            }
        }

        for s in &self.stores {
            let subject = format!("store {}", s.id);
            if s.bus.0 >= self.buses.len() {
                push(&mut out, subject.clone(), "dangling reference: bus".into());
            }
            if !finite_nonneg(s.e_existing) || !finite_nonneg(s.capex_annual) {
                push(&mut out, subject.clone(), "e_existing and capex_annual must be finite and >= 0".into());
            }
            if s.fictional && (s.capex_annual != 0.0 || s.extendable) {
                push(&mut out, subject, "fictional store must have zero cost and must not be extendable".into());
            }
        }

        for d in &self.loads {
            let subject = format!("load {}", d.id);
            if d.bus.0 >= self.buses.len() {
                push(&mut out, subject.clone(), "dangling reference: bus".into());
            }
            if d.profile.len() != t {
                push(&mut out, subject.clone(), format!("load profile has {} entries, expected {}", d.profile.len(), t));
            }
            if let Some(bad) = d.profile.iter().position(|&v| !v.is_finite() || v < 0.0) {
                push(&mut out, subject, format!("load must be finite and >= 0, violated at snapshot {bad}"));
            }
        }

        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bus_network() -> Network {
        Network {
            carriers: vec![
                Carrier { name: "electricity".into(), co2_factor: 0.0, renewable: false },
                Carrier { name: "hydrogen".into(), co2_factor: 0.0, renewable: false },
            ],
            snapshots: SnapshotSet::single_month(2, 3.0),
            buses: vec![
                Bus { id: "elec".into(), carrier: CarrierId(0), export_port: false },
                Bus { id: "h2".into(), carrier: CarrierId(1), export_port: true },
            ],
            generators: vec![Generator {
                id: "gen".into(),
                bus: BusId(0),
                carrier: CarrierId(0),
                p_existing: 10.0,
                extendable: false,
                p_max_build: None,
                capex_annual: 0.0,
                marginal_cost: 30.0,
                availability: vec![1.0, 1.0],
                tech_class: "gas".into(),
            }],
            links: vec![Link {
                id: "ely".into(),
                from_bus: BusId(0),
                to_bus: BusId(1),
                efficiency: 0.68,
                p_existing: 5.0,
                extendable: false,
                capex_annual: 0.0,
                marginal_cost: 0.0,
                electrolyzer: true,
                tech_class: "electrolysis".into(),
            }],
            stores: vec![],
            loads: vec![Load { id: "demand".into(), bus: BusId(1), profile: vec![1.0, 1.0], sector: "export".into() }],
        }
    }

    #[test]
    fn well_formed_network_has_empty_report() {
        assert!(two_bus_network().validate().is_empty());
    }

    #[test]
    fn availability_above_one_is_reported() {
        let mut n = two_bus_network();
        n.generators[0].availability[1] = 1.2;
        let report = n.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("profile out of [0,1]"), "{}", report[0]);
    }

    #[test]
    fn dangling_bus_reference_is_reported() {
        let mut n = two_bus_network();
        n.links[0].to_bus = BusId(9);
        let report = n.validate();
        assert!(report.iter().any(|v| v.message.contains("dangling reference")));
    }

    #[test]
    fn export_port_on_electric_bus_is_reported() {
        let mut n = two_bus_network();
        n.buses[0].export_port = true;
        assert!(n.validate().iter().any(|v| v.message.contains("hydrogen carrier")));
    }

    #[test]
    fn electrolyzer_direction_is_checked() {
        let mut n = two_bus_network();
        let link = &mut n.links[0];
        std::mem::swap(&mut link.from_bus, &mut link.to_bus);
        assert!(n.validate().iter().any(|v| v.subject == "link ely"));
    }

    #[test]
    fn month_index_must_not_decrease() {
        let mut n = two_bus_network();
        n.snapshots.month_index = vec![2, 1];
        assert!(n.validate().iter().any(|v| v.message.contains("decreases")));
    }

    #[test]
    fn profile_length_mismatch_names_the_component() {
        let mut n = two_bus_network();
        n.loads[0].profile.push(1.0);
        let report = n.validate();
        assert!(report.iter().any(|v| v.subject == "load demand" && v.message.contains("expected 2")));
    }
}
