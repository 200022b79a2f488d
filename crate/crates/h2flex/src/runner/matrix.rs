use super::config::{config_fingerprint, ScenarioConfig};
use super::report;
use super::system::load_system;
use crate::analysis::{
    cost_breakdown, delivery_schedule, take_off_price, verify_solution, CostBreakdown, DeliverySchedule,
    PriceReport,
};
use crate::formulation::{assemble_lp, Formulation, ReferenceProfile};
use crate::model::{EmissionCap, ExportSpec, Network};
use crate::solver::{solve, LpSolution, SolveStatus, Tolerances};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] super::config::ConfigError),
    #[error(transparent)]
    System(#[from] super::system::SystemError),
    #[error("formulation failed: {0}")]
    Formulation(#[from] crate::formulation::FormulationError),
    #[error("solver failed: {0}")]
    Solver(#[from] crate::solver::LpError),
    #[error("reference run ended {status:?}: {note}")]
    ReferenceNotOptimal { status: SolveStatus, note: String },
    #[error("no export port found; mark a hydrogen bus with export_port")]
    NoPorts,
    #[error("unknown port bus `{0}`")]
    UnknownPort(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// The solved no-export baseline used by every cell.
pub struct ReferenceRun {
    pub formulation: Formulation,
    pub solution: LpSolution,
    pub profile: ReferenceProfile,
    pub emissions_tons: f64,
}

/// Solves the pre-export system (no export components, no matching policy)
/// and aggregates the monthly reference totals.
pub fn run_reference(network: &Network, cap: &EmissionCap, tol: &Tolerances) -> Result<ReferenceRun, RunError> {
    let formulation = assemble_lp(network, None, None, cap)?;
    let solution = solve(&formulation.lp, tol)?;
    if !solution.is_optimal() {
        return Err(RunError::ReferenceNotOptimal {
            status: solution.status,
            note: solution.note.clone().unwrap_or_default(),
        });
    }
    let profile = ReferenceProfile::from_primal(&formulation.network, &formulation.index, solution.primal_ref());
    let emissions_tons = emissions_of(&formulation, solution.primal_ref());
    Ok(ReferenceRun { formulation, solution, profile, emissions_tons })
}

/// CO2 of a solved system: generator dispatch times carrier factor.
pub fn emissions_of(formulation: &Formulation, primal: &[f64]) -> f64 {
    let network = &formulation.network;
    let w = network.snapshots.weight;
    let mut total = 0.0;
    for (g, gen) in network.generators.iter().enumerate() {
        let co2 = network.carrier(gen.carrier).co2_factor;
        if co2 > 0.0 {
            for t in 0..network.snapshots.count {
                total += w * co2 * primal[formulation.index.gen_dispatch(g, t) as usize];
            }
        }
    }
    total
}

/// Everything reported for one (tau, volume) cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellReport {
    pub tau_label: String,
    pub tau: f64,
    pub volume_mwh: f64,
    pub status: String,
    pub objective: Option<f64>,
    /// (objective - reference objective) / volume, EUR/MWh.
    pub additional_cost_per_mwh: Option<f64>,
    pub price: Option<PriceReport>,
    pub schedule: Option<DeliverySchedule>,
    pub breakdown: Option<CostBreakdown>,
    pub verification_passed: bool,
    pub iterations: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceSummary {
    pub status: String,
    pub objective: f64,
    pub emissions_tons: f64,
    pub profile: ReferenceProfile,
}

/// Full scenario output: provenance, the reference summary, and one report
/// per requested cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunArtifact {
    pub scenario: String,
    pub config_hash: String,
    pub tool_version: String,
    pub reference: ReferenceSummary,
    pub cells: Vec<CellReport>,
}

fn status_name(status: SolveStatus) -> String {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::IterationLimit => "iteration_limit",
    }
    .to_string()
}

/// Solves one export cell against a shared reference.
pub fn run_cell(
    network: &Network,
    reference: &ReferenceRun,
    ports: &[crate::model::BusId],
    tau_label: &str,
    tau: f64,
    volume_mwh: f64,
    temporal_matching: bool,
    cap: &EmissionCap,
    tol: &Tolerances,
) -> CellReport {
    let mut report = CellReport {
        tau_label: tau_label.to_string(),
        tau,
        volume_mwh,
        status: String::new(),
        objective: None,
        additional_cost_per_mwh: None,
        price: None,
        schedule: None,
        breakdown: None,
        verification_passed: false,
        iterations: 0,
        note: None,
    };
    let spec = match ExportSpec::new(ports.to_vec(), volume_mwh, tau) {
        Ok(spec) => spec,
        Err(e) => {
            report.status = "invalid".into();
            report.note = Some(e.to_string());
            return report;
        }
    };
    let policy = temporal_matching.then_some(&reference.profile);
    let formulation = match assemble_lp(network, Some(&spec), policy, cap) {
        Ok(f) => f,
        Err(e) => {
            report.status = "invalid".into();
            report.note = Some(e.to_string());
            return report;
        }
    };
    let solution = match solve(&formulation.lp, tol) {
        Ok(s) => s,
        Err(e) => {
            report.status = "error".into();
            report.note = Some(e.to_string());
            return report;
        }
    };
    report.status = status_name(solution.status);
    report.iterations = solution.iterations;
    report.note = solution.note.clone();
    if !solution.is_optimal() {
        return report;
    }
    report.objective = solution.objective;
    report.additional_cost_per_mwh =
        solution.objective.map(|obj| (obj - reference.solution.objective.unwrap()) / volume_mwh);
    report.verification_passed = verify_solution(&solution, &formulation.lp, tol).passed();
    report.price = take_off_price(&solution, &formulation).ok();
    report.schedule = delivery_schedule(&solution, &formulation).ok();
    report.breakdown = cost_breakdown(&solution, &formulation, &reference.solution, &reference.formulation).ok();
    report
}

/// Executes the whole scenario: one reference solve, then every tau x volume
/// cell (in parallel when configured), then the report files. Failed cells
/// are recorded and do not stop the remaining cells.
pub fn run_matrix(config: &ScenarioConfig) -> Result<RunArtifact, RunError> {
    let network = load_system(&config.system, &config.timeseries, config.wacc)?;
    let ports = if config.ports.is_empty() {
        network.export_ports()
    } else {
        config
            .ports
            .iter()
            .map(|name| network.bus_by_name(name).ok_or_else(|| RunError::UnknownPort(name.clone())))
            .collect::<Result<Vec<_>, _>>()?
    };
    if ports.is_empty() {
        return Err(RunError::NoPorts);
    }
    let cap = match config.emission_cap_tons {
        Some(limit) => EmissionCap::tons(limit),
        None => EmissionCap::disabled(),
    };
    let tol = config.tolerances;
    let reference = run_reference(&network, &cap, &tol)?;

    let mut grid = Vec::new();
    for schedule in &config.schedules {
        let (label, tau) = schedule.resolve()?;
        for &q in &config.volumes_mwh {
            grid.push((label.clone(), tau, q));
        }
    }
    let run_one = |(label, tau, q): &(String, f64, f64)| {
        run_cell(&network, &reference, &ports, label, *tau, *q, config.temporal_matching, &cap, &tol)
    };
    let cells: Vec<CellReport> = if config.workers == 1 {
        grid.iter().map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .expect("thread pool construction cannot fail with these settings");
        pool.install(|| grid.par_iter().map(run_one).collect())
    };

    let artifact = RunArtifact {
        scenario: config.name.clone(),
        config_hash: config_fingerprint(config),
        tool_version: TOOL_VERSION.to_string(),
        reference: ReferenceSummary {
            status: status_name(reference.solution.status),
            objective: reference.solution.objective.unwrap(),
            emissions_tons: reference.emissions_tons,
            profile: reference.profile.clone(),
        },
        cells,
    };
    report::write_artifact(&config.output, &artifact)?;
    Ok(artifact)
}
