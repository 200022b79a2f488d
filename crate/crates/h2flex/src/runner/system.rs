//! Declarative system format: a sectioned TOML file with component tables
//! plus sidecar CSVs for profiles.
//!
//! `availability.csv` and `loads.csv` carry one column per referenced profile
//! name with a leading `snapshot` index column; `snapshots.csv` carries the
//! calendar month per snapshot. Investment data is annualized at load time
//! with the effective WACC (component override, else scenario, else system
//! default): percent-style fixed O&M enters the annuity as a fraction of the
//! investment, EUR-per-kW-style O&M is added directly.

use crate::model::{annuitize, Bus, BusId, Carrier, CarrierId, Generator, Link, Load, Network, SnapshotSet, Store};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{context}: unknown {kind} `{name}`")]
    UnknownReference { context: String, kind: String, name: String },
    #[error("profile `{profile}` for {component}: expected {expected} rows, found {found}")]
    ProfileLength { component: String, profile: String, expected: usize, found: usize },
    #[error("{component}: {message}")]
    Component { component: String, message: String },
    #[error("network failed validation:\n{0}")]
    Invalid(String),
}

/// Investment data shared by generators, links and stores.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CostSpec {
    /// Direct annual cost; mutually exclusive with `investment`.
    pub capex_annual: Option<f64>,
    /// Overnight investment in EUR/kW (EUR/kWh for stores).
    pub investment: Option<f64>,
    pub lifetime: Option<f64>,
    /// Fixed O&M as percent of investment per year.
    pub fom_percent: Option<f64>,
    /// Fixed O&M in EUR/kW/year, added after annuitization.
    pub fom_eur_per_kw: Option<f64>,
    /// Per-component override of the scenario WACC.
    pub wacc: Option<f64>,
}

impl CostSpec {
    /// Annual cost per MW (per MWh for stores), EUR.
    fn resolve(&self, component: &str, wacc: f64) -> Result<f64, SystemError> {
        if let Some(direct) = self.capex_annual {
            if self.investment.is_some() {
                return Err(SystemError::Component {
                    component: component.into(),
                    message: "give either capex_annual or investment, not both".into(),
                });
            }
            return Ok(direct);
        }
        let Some(investment) = self.investment else { return Ok(0.0) };
        let lifetime = self.lifetime.ok_or_else(|| SystemError::Component {
            component: component.into(),
            message: "investment requires a lifetime".into(),
        })?;
        let rate = self.wacc.unwrap_or(wacc);
        let fom_fraction = self.fom_percent.unwrap_or(0.0) / 100.0;
        let per_kw = annuitize(investment, lifetime, rate, fom_fraction).map_err(|e| SystemError::Component {
            component: component.into(),
            message: e.to_string(),
        })? + self.fom_eur_per_kw.unwrap_or(0.0);
        Ok(per_kw * 1000.0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnapshotSpec {
    pub count: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarrierSpec {
    pub name: String,
    #[serde(default)]
    pub co2_factor: f64,
    #[serde(default)]
    pub renewable: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BusSpec {
    pub id: String,
    pub carrier: String,
    #[serde(default)]
    pub export_port: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub id: String,
    pub bus: String,
    pub carrier: String,
    #[serde(default)]
    pub p_existing: f64,
    #[serde(default)]
    pub extendable: bool,
    pub p_max_build: Option<f64>,
    #[serde(default)]
    pub marginal_cost: f64,
    /// Column name in `availability.csv`; constant 1.0 when absent.
    pub profile: Option<String>,
    pub class: Option<String>,
    #[serde(flatten)]
    pub cost: CostSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub efficiency: f64,
    #[serde(default)]
    pub p_existing: f64,
    #[serde(default)]
    pub extendable: bool,
    #[serde(default)]
    pub marginal_cost: f64,
    #[serde(default)]
    pub electrolyzer: bool,
    pub class: Option<String>,
    #[serde(flatten)]
    pub cost: CostSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StoreSpec {
    pub id: String,
    pub bus: String,
    #[serde(default)]
    pub e_existing: f64,
    #[serde(default)]
    pub extendable: bool,
    #[serde(default = "default_true")]
    pub cyclic: bool,
    pub class: Option<String>,
    #[serde(flatten)]
    pub cost: CostSpec,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoadSpec {
    pub id: String,
    pub bus: String,
    /// Column name in `loads.csv`.
    pub profile: String,
    #[serde(default)]
    pub sector: String,
}

/// The parsed system file, before profile resolution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: String,
    pub snapshots: SnapshotSpec,
    #[serde(default)]
    pub wacc: f64,
    #[serde(default, rename = "carrier")]
    pub carriers: Vec<CarrierSpec>,
    #[serde(default, rename = "bus")]
    pub buses: Vec<BusSpec>,
    #[serde(default, rename = "generator")]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, rename = "link")]
    pub links: Vec<LinkSpec>,
    #[serde(default, rename = "store")]
    pub stores: Vec<StoreSpec>,
    #[serde(default, rename = "load")]
    pub loads: Vec<LoadSpec>,
}

/// Time series read from the sidecar CSVs, keyed by column name.
#[derive(Clone, Debug, Default)]
pub struct ProfileSet {
    pub availability: BTreeMap<String, Vec<f64>>,
    pub loads: BTreeMap<String, Vec<f64>>,
    pub month_index: Vec<u8>,
}

/// Reads a numeric CSV with a leading snapshot column into per-column series.
fn read_profile_csv(path: &Path) -> Result<BTreeMap<String, Vec<f64>>, SystemError> {
    let display = path.display().to_string();
    let mut reader = csv::Reader::from_path(path).map_err(|e| SystemError::Parse { path: display.clone(), message: e.to_string() })?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| SystemError::Parse { path: display.clone(), message: e.to_string() })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut out: BTreeMap<String, Vec<f64>> = headers.iter().skip(1).map(|h| (h.clone(), Vec::new())).collect();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| SystemError::Parse { path: display.clone(), message: e.to_string() })?;
        for (col, header) in headers.iter().enumerate().skip(1) {
            let field = record.get(col).unwrap_or("");
            let value: f64 = field.trim().parse().map_err(|_| SystemError::Parse {
                path: display.clone(),
                message: format!("row {}, column {header}: bad number `{field}`", row_idx + 2),
            })?;
            out.get_mut(header).unwrap().push(value);
        }
    }
    Ok(out)
}

/// Loads the profile CSVs referenced by a system from `timeseries_dir`.
pub fn load_profiles(timeseries_dir: &Path) -> Result<ProfileSet, SystemError> {
    let availability_path = timeseries_dir.join("availability.csv");
    let availability = if availability_path.exists() {
        read_profile_csv(&availability_path)?
    } else {
        BTreeMap::new()
    };
    let loads = read_profile_csv(&timeseries_dir.join("loads.csv"))?;
    let snapshots_path = timeseries_dir.join("snapshots.csv");
    let months = read_profile_csv(&snapshots_path)?;
    let month_index = months
        .get("month")
        .ok_or_else(|| SystemError::Parse {
            path: snapshots_path.display().to_string(),
            message: "missing `month` column".into(),
        })?
        .iter()
        .map(|&v| v as u8)
        .collect();
    Ok(ProfileSet { availability, loads, month_index })
}

/// Resolves a parsed system plus profiles into a validated [`Network`].
pub fn resolve(spec: &SystemSpec, profiles: &ProfileSet, wacc_override: Option<f64>) -> Result<Network, SystemError> {
    let wacc = wacc_override.unwrap_or(spec.wacc);
    let t = spec.snapshots.count;

    let carriers: Vec<Carrier> = spec
        .carriers
        .iter()
        .map(|c| Carrier { name: c.name.clone(), co2_factor: c.co2_factor, renewable: c.renewable })
        .collect();
    let carrier_id = |name: &str, context: &str| -> Result<CarrierId, SystemError> {
        carriers
            .iter()
            .position(|c| c.name == name)
            .map(CarrierId)
            .ok_or_else(|| SystemError::UnknownReference {
                context: context.into(),
                kind: "carrier".into(),
                name: name.into(),
            })
    };

    let buses: Vec<Bus> = spec
        .buses
        .iter()
        .map(|b| {
            Ok(Bus { id: b.id.clone(), carrier: carrier_id(&b.carrier, &format!("bus {}", b.id))?, export_port: b.export_port })
        })
        .collect::<Result<_, SystemError>>()?;
    let bus_id = |name: &str, context: &str| -> Result<BusId, SystemError> {
        buses.iter().position(|b| b.id == name).map(BusId).ok_or_else(|| SystemError::UnknownReference {
            context: context.into(),
            kind: "bus".into(),
            name: name.into(),
        })
    };

    let availability = |name: &Option<String>, component: &str| -> Result<Vec<f64>, SystemError> {
        match name {
            None => Ok(vec![1.0; t]),
            Some(profile) => {
                let series = profiles.availability.get(profile).ok_or_else(|| SystemError::UnknownReference {
                    context: component.into(),
                    kind: "availability profile".into(),
                    name: profile.clone(),
                })?;
                if series.len() != t {
                    return Err(SystemError::ProfileLength {
                        component: component.into(),
                        profile: profile.clone(),
                        expected: t,
                        found: series.len(),
                    });
                }
                Ok(series.clone())
            }
        }
    };

    let mut generators = Vec::with_capacity(spec.generators.len());
    for g in &spec.generators {
        let context = format!("generator {}", g.id);
        generators.push(Generator {
            id: g.id.clone(),
            bus: bus_id(&g.bus, &context)?,
            carrier: carrier_id(&g.carrier, &context)?,
            p_existing: g.p_existing,
            extendable: g.extendable,
            p_max_build: g.p_max_build,
            capex_annual: g.cost.resolve(&context, wacc)?,
            marginal_cost: g.marginal_cost,
            availability: availability(&g.profile, &context)?,
            tech_class: g.class.clone().unwrap_or_else(|| g.carrier.clone()),
        });
    }

    let mut links = Vec::with_capacity(spec.links.len());
    for l in &spec.links {
        let context = format!("link {}", l.id);
        links.push(Link {
            id: l.id.clone(),
            from_bus: bus_id(&l.from, &context)?,
            to_bus: bus_id(&l.to, &context)?,
            efficiency: l.efficiency,
            p_existing: l.p_existing,
            extendable: l.extendable,
            capex_annual: l.cost.resolve(&context, wacc)?,
            marginal_cost: l.marginal_cost,
            electrolyzer: l.electrolyzer,
            tech_class: l.class.clone().unwrap_or_else(|| if l.electrolyzer { "electrolysis".into() } else { "transmission".into() }),
        });
    }

    let mut stores = Vec::with_capacity(spec.stores.len());
    for s in &spec.stores {
        let context = format!("store {}", s.id);
        stores.push(Store {
            id: s.id.clone(),
            bus: bus_id(&s.bus, &context)?,
            e_existing: s.e_existing,
            extendable: s.extendable,
            capex_annual: s.cost.resolve(&context, wacc)?,
            cyclic: s.cyclic,
            fictional: false,
            tech_class: s.class.clone().unwrap_or_else(|| "store".into()),
        });
    }

    let mut loads = Vec::with_capacity(spec.loads.len());
    for d in &spec.loads {
        let context = format!("load {}", d.id);
        let series = profiles.loads.get(&d.profile).ok_or_else(|| SystemError::UnknownReference {
            context: context.clone(),
            kind: "load profile".into(),
            name: d.profile.clone(),
        })?;
        if series.len() != t {
            return Err(SystemError::ProfileLength {
                component: context,
                profile: d.profile.clone(),
                expected: t,
                found: series.len(),
            });
        }
        loads.push(Load { id: d.id.clone(), bus: bus_id(&d.bus, &context)?, profile: series.clone(), sector: d.sector.clone() });
    }

    if profiles.month_index.len() != t {
        return Err(SystemError::Parse {
            path: "snapshots.csv".into(),
            message: format!("expected {t} month rows, found {}", profiles.month_index.len()),
        });
    }
    let network = Network {
        carriers,
        snapshots: SnapshotSet::new(t, spec.snapshots.weight, profiles.month_index.clone()),
        buses,
        generators,
        links,
        stores,
        loads,
    };
    let violations = network.validate();
    if !violations.is_empty() {
        let text = violations.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n");
        return Err(SystemError::Invalid(text));
    }
    Ok(network)
}

/// Reads `system_path` and the profile CSVs in `timeseries_dir` into a
/// validated network.
pub fn load_system(system_path: &Path, timeseries_dir: &Path, wacc_override: Option<f64>) -> Result<Network, SystemError> {
    let display = system_path.display().to_string();
    let text = std::fs::read_to_string(system_path).map_err(|e| SystemError::Io { path: display.clone(), source: e })?;
    let spec: SystemSpec = toml::from_str(&text).map_err(|e| SystemError::Parse { path: display, message: e.to_string() })?;
    let profiles = load_profiles(timeseries_dir)?;
    resolve(&spec, &profiles, wacc_override)
}
