//! The bundled desk benchmark: three electric buses (wind in the north,
//! hydro plus a gas fleet and the main demand in the south, solar near the
//! port), one hydrogen hub flagged as export port, an extendable electrolyzer
//! and hydrogen tank, a full year at 3-hour resolution (T = 2920).
//!
//! Profiles are deterministic closed forms (diurnal/seasonal shapes plus a
//! small congruential dither), so every run of the generator produces the
//! same bytes. Technology costs are annualized from overnight investment at
//! the scenario WACC.

use crate::model::Network;
use crate::runner::{
    resolve, BusSpec, CarrierSpec, CostSpec, GeneratorSpec, LinkSpec, LoadSpec, ProfileSet,
    ScenarioConfig, ScheduleEntry, SnapshotSpec, StoreSpec, SystemError, SystemSpec,
};
use crate::solver::Tolerances;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const SNAPSHOTS: usize = 2920;
pub const WEIGHT_HOURS: f64 = 3.0;
pub const WACC: f64 = 0.076;
/// Study volumes in MWh (1, 3 and 8 TWh of hydrogen per year).
pub const VOLUMES_MWH: [f64; 3] = [1.0e6, 3.0e6, 8.0e6];
/// Annual CO2 budget in tons; binding at the optimum, so exports cannot lean
/// on extra fossil generation.
pub const EMISSION_CAP_TONS: f64 = 1.0e6;

/// Days per calendar month of a non-leap year.
const MONTH_DAYS: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

fn month_of_day(day: u32) -> u8 {
    let mut acc = 0;
    for (m, &len) in MONTH_DAYS.iter().enumerate() {
        acc += len;
        if day < acc {
            return (m + 1) as u8;
        }
    }
    12
}

pub fn month_index() -> Vec<u8> {
    (0..SNAPSHOTS).map(|t| month_of_day((t * 3 / 24) as u32)).collect()
}

struct Dither {
    state: u64,
}

impl Dither {
    fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Uniform in [0, 1), deterministic across platforms.
    fn next(&mut self) -> f64 {
        self.state = self.state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.state >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn hour_of_year(t: usize) -> f64 {
    t as f64 * WEIGHT_HOURS + 0.5 * WEIGHT_HOURS
}

const TAU_YEAR: f64 = std::f64::consts::TAU / 8760.0;
const TAU_DAY: f64 = std::f64::consts::TAU / 24.0;

pub fn solar_profile() -> Vec<f64> {
    (0..SNAPSHOTS)
        .map(|t| {
            let h = hour_of_year(t);
            let hd = h % 24.0;
            let day = h / 24.0;
            let season = 0.75 + 0.25 * (TAU_YEAR * (day - 172.0) * 24.0).cos();
            let diurnal = (std::f64::consts::PI * (hd - 5.5) / 13.0).sin().max(0.0);
            (season * diurnal).clamp(0.0, 1.0)
        })
        .collect()
}

pub fn wind_profile() -> Vec<f64> {
    let mut dither = Dither::new(0x5eed_0001);
    (0..SNAPSHOTS)
        .map(|t| {
            let h = hour_of_year(t);
            let day = h / 24.0;
            let seasonal = 0.5 * (1.0 + (TAU_YEAR * (day - 15.0) * 24.0).cos());
            // Multi-day weather systems: fronts passing every few days, which
            // a weekly buffer can ride but a daily buffer cannot.
            let synoptic = 0.5
                * (1.0
                    + 0.65 * (std::f64::consts::TAU * h / 127.0).sin()
                    + 0.35 * (std::f64::consts::TAU * h / 73.0).cos());
            let gusts = dither.next();
            (0.03 + 0.22 * seasonal + 0.63 * synoptic * synoptic + 0.12 * gusts).clamp(0.02, 1.0)
        })
        .collect()
}

/// Strongly seasonal availability peaking in the rainy season (late winter).
pub fn hydro_profile() -> Vec<f64> {
    let mut dither = Dither::new(0x5eed_0002);
    (0..SNAPSHOTS)
        .map(|t| {
            let h = hour_of_year(t);
            let day = h / 24.0;
            let wet = 0.5 * (1.0 + (TAU_YEAR * (day - 45.0) * 24.0).cos());
            (0.22 + 0.62 * wet * wet + 0.06 * dither.next()).clamp(0.0, 1.0)
        })
        .collect()
}

pub fn demand_south_profile() -> Vec<f64> {
    (0..SNAPSHOTS)
        .map(|t| {
            let h = hour_of_year(t);
            let hd = h % 24.0;
            let day = h / 24.0;
            let seasonal = 200.0 * (TAU_YEAR * (day - 10.0) * 24.0).cos();
            let daily = 70.0 * (TAU_DAY * (hd - 9.0)).cos().max(0.0);
            950.0 + seasonal + daily
        })
        .collect()
}

pub fn demand_port_profile() -> Vec<f64> {
    demand_south_profile().into_iter().map(|v| 0.25 * v).collect()
}

pub fn h2_domestic_profile() -> Vec<f64> {
    vec![60.0; SNAPSHOTS]
}

/// The declarative system description of the benchmark.
pub fn system_spec() -> SystemSpec {
    // Existing corridors can be reinforced at HVAC-like cost.
    let transmission = |id: &str, from: &str, to: &str| LinkSpec {
        id: id.into(),
        from: from.into(),
        to: to.into(),
        efficiency: 0.97,
        p_existing: 1000.0,
        extendable: true,
        marginal_cost: 0.0,
        electrolyzer: false,
        class: Some("transmission".into()),
        cost: CostSpec {
            investment: Some(500.0),
            lifetime: Some(40.0),
            fom_percent: Some(2.0),
            ..CostSpec::default()
        },
    };
    let gen = |id: &str, bus: &str, carrier: &str, class: &str| GeneratorSpec {
        id: id.into(),
        bus: bus.into(),
        carrier: carrier.into(),
        p_existing: 0.0,
        extendable: false,
        p_max_build: None,
        marginal_cost: 0.0,
        profile: None,
        class: Some(class.into()),
        cost: CostSpec::default(),
    };
    SystemSpec {
        name: "demo".into(),
        snapshots: SnapshotSpec { count: SNAPSHOTS, weight: WEIGHT_HOURS },
        wacc: WACC,
        carriers: vec![
            CarrierSpec { name: "electricity".into(), co2_factor: 0.0, renewable: false },
            CarrierSpec { name: "hydrogen".into(), co2_factor: 0.0, renewable: false },
            CarrierSpec { name: "solar".into(), co2_factor: 0.0, renewable: true },
            CarrierSpec { name: "wind".into(), co2_factor: 0.0, renewable: true },
            // Whether hydro counts towards the policy's renewable set is a
            // modeling choice; the benchmark includes it.
            CarrierSpec { name: "hydro".into(), co2_factor: 0.0, renewable: true },
            // Open-cycle gas fleet folded to the electric side: 0.198 t/MWh
            // thermal at 40 % efficiency.
            CarrierSpec { name: "gas".into(), co2_factor: 0.495, renewable: false },
        ],
        buses: vec![
            BusSpec { id: "north".into(), carrier: "electricity".into(), export_port: false },
            BusSpec { id: "south".into(), carrier: "electricity".into(), export_port: false },
            BusSpec { id: "port".into(), carrier: "electricity".into(), export_port: false },
            BusSpec { id: "h2_hub".into(), carrier: "hydrogen".into(), export_port: true },
        ],
        generators: vec![
            GeneratorSpec {
                extendable: true,
                profile: Some("wind_north".into()),
                marginal_cost: 1.35,
                cost: CostSpec {
                    investment: Some(1450.0),
                    lifetime: Some(30.0),
                    fom_eur_per_kw: Some(21.0),
                    ..CostSpec::default()
                },
                ..gen("wind_north", "north", "wind", "onshore wind")
            },
            GeneratorSpec {
                extendable: true,
                // Land around the port limits utility-scale PV; bulk export
                // power comes from the northern wind sites.
                p_max_build: Some(400.0),
                profile: Some("solar_port".into()),
                cost: CostSpec {
                    investment: Some(438.0),
                    lifetime: Some(20.0),
                    fom_eur_per_kw: Some(8.77),
                    ..CostSpec::default()
                },
                ..gen("solar_port", "port", "solar", "solar")
            },
            GeneratorSpec {
                p_existing: 1000.0,
                profile: Some("hydro_south".into()),
                marginal_cost: 1.2,
                ..gen("hydro_south", "south", "hydro", "hydro")
            },
            GeneratorSpec {
                // 25 EUR/MWh fuel at 40 % efficiency plus 4.5 EUR/MWh VOM.
                p_existing: 2000.0,
                marginal_cost: 67.0,
                ..gen("gas_south", "south", "gas", "gas")
            },
        ],
        links: vec![
            transmission("trans_north_south", "north", "south"),
            transmission("trans_south_north", "south", "north"),
            transmission("trans_south_port", "south", "port"),
            transmission("trans_port_south", "port", "south"),
            LinkSpec {
                id: "electrolysis_port".into(),
                from: "port".into(),
                to: "h2_hub".into(),
                efficiency: 0.68,
                p_existing: 0.0,
                extendable: true,
                marginal_cost: 0.0,
                electrolyzer: true,
                class: Some("electrolysis".into()),
                cost: CostSpec {
                    investment: Some(450.0),
                    lifetime: Some(30.0),
                    fom_percent: Some(2.0),
                    ..CostSpec::default()
                },
            },
        ],
        stores: vec![StoreSpec {
            id: "h2_tank".into(),
            bus: "h2_hub".into(),
            e_existing: 0.0,
            extendable: true,
            cyclic: true,
            class: Some("hydrogen tank".into()),
            cost: CostSpec {
                investment: Some(44.91),
                lifetime: Some(30.0),
                fom_percent: Some(1.11),
                ..CostSpec::default()
            },
        }],
        loads: vec![
            LoadSpec { id: "demand_south".into(), bus: "south".into(), profile: "demand_south".into(), sector: "electricity".into() },
            LoadSpec { id: "demand_port".into(), bus: "port".into(), profile: "demand_port".into(), sector: "electricity".into() },
            LoadSpec { id: "h2_domestic".into(), bus: "h2_hub".into(), profile: "h2_domestic".into(), sector: "industry".into() },
        ],
    }
}

pub fn profile_set() -> ProfileSet {
    let mut availability = BTreeMap::new();
    availability.insert("wind_north".to_string(), wind_profile());
    availability.insert("solar_port".to_string(), solar_profile());
    availability.insert("hydro_south".to_string(), hydro_profile());
    let mut loads = BTreeMap::new();
    loads.insert("demand_south".to_string(), demand_south_profile());
    loads.insert("demand_port".to_string(), demand_port_profile());
    loads.insert("h2_domestic".to_string(), h2_domestic_profile());
    ProfileSet { availability, loads, month_index: month_index() }
}

/// The benchmark network, built in memory through the same resolution path
/// as file loading.
pub fn network() -> Result<Network, SystemError> {
    resolve(&system_spec(), &profile_set(), None)
}

/// The scenario configuration of the bundled study grid, with paths relative
/// to `dir`.
pub fn scenario_config(dir: &Path) -> ScenarioConfig {
    ScenarioConfig {
        name: "demo".into(),
        system: dir.join("system.toml"),
        timeseries: dir.join("timeseries"),
        output: dir.join("out"),
        wacc: Some(WACC),
        volumes_mwh: VOLUMES_MWH.to_vec(),
        schedules: vec![
            ScheduleEntry::Label("flexible".into()),
            ScheduleEntry::Label("weekly".into()),
            ScheduleEntry::Label("daily".into()),
            ScheduleEntry::Label("stable".into()),
        ],
        temporal_matching: true,
        emission_cap_tons: Some(EMISSION_CAP_TONS),
        ports: vec!["h2_hub".into()],
        workers: 0,
        tolerances: Tolerances::default(),
    }
}

fn csv_of(columns: &[(&str, &[f64])]) -> String {
    let rows = columns[0].1.len();
    let mut out = String::new();
    out.push_str("snapshot");
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for t in 0..rows {
        let _ = write!(out, "{t}");
        for (_, series) in columns {
            let _ = write!(out, ",{}", series[t]);
        }
        out.push('\n');
    }
    out
}

/// Writes the complete demo fixture (system, profiles, scenario config) into
/// `dir`; byte-identical on every invocation.
pub fn write_demo(dir: &Path) -> std::io::Result<()> {
    let timeseries = dir.join("timeseries");
    std::fs::create_dir_all(&timeseries)?;

    let system =
        toml::to_string_pretty(&system_spec()).expect("demo system serializes");
    std::fs::write(dir.join("system.toml"), system)?;

    let profiles = profile_set();
    let availability: Vec<(&str, &[f64])> =
        profiles.availability.iter().map(|(k, v)| (k.as_str(), v.as_slice())).collect();
    std::fs::write(timeseries.join("availability.csv"), csv_of(&availability))?;
    let loads: Vec<(&str, &[f64])> = profiles.loads.iter().map(|(k, v)| (k.as_str(), v.as_slice())).collect();
    std::fs::write(timeseries.join("loads.csv"), csv_of(&loads))?;
    let months: Vec<f64> = profiles.month_index.iter().map(|&m| m as f64).collect();
    std::fs::write(timeseries.join("snapshots.csv"), csv_of(&[("month", &months)]))?;

    let mut config = scenario_config(Path::new(""));
    config.system = "system.toml".into();
    config.timeseries = "timeseries".into();
    config.output = "out".into();
    let config_text = toml::to_string_pretty(&config).expect("demo config serializes");
    std::fs::write(dir.join("config.toml"), config_text)?;
    Ok(())
}
