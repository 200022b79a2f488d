use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use h2flex::formulation::assemble_lp;
use h2flex::model::{EmissionCap, ExportSpec};
use h2flex::runner::{
    load_system, read_artifact, render_summary_csv, run_matrix, run_reference, ScenarioConfig,
    ScheduleEntry,
};
use h2flex::solver::write_interchange_file;
use std::path::PathBuf;

/// Multi-carrier energy-system LP engine for pricing hydrogen export
/// delivery schedules.
#[derive(Parser)]
#[command(name = "h2flex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Load a system file and print every validation violation.
    Validate {
        /// Path to the system TOML file.
        system: PathBuf,
        /// Directory with availability.csv, loads.csv and snapshots.csv;
        /// defaults to `timeseries` next to the system file.
        #[arg(long)]
        timeseries: Option<PathBuf>,
    },
    /// Execute a scenario: reference solve plus the full tau x volume matrix.
    Run {
        /// Path to the scenario config TOML file.
        config: PathBuf,
    },
    /// Re-render a finished run from its artifact.
    Report {
        /// Run output directory or artifact.json path.
        artifact: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: ReportFormat,
    },
    /// Write the LP of one matrix cell in MPS interchange form.
    Lpwrite {
        /// Path to the scenario config TOML file.
        config: PathBuf,
        /// Cell selector `<schedule>,<volume_mwh>`, e.g. `stable,8760`.
        #[arg(long)]
        cell: String,
        /// Destination MPS file.
        path: PathBuf,
    },
    /// Write the bundled demo system, profiles and scenario config.
    Demo {
        /// Destination directory.
        dir: PathBuf,
    },
}

fn parse_cell(cell: &str) -> Result<(String, f64, f64)> {
    let (schedule, volume) = cell
        .split_once(',')
        .ok_or_else(|| anyhow!("cell must be `<schedule>,<volume_mwh>`, got `{cell}`"))?;
    let entry = match schedule.parse::<f64>() {
        Ok(tau) => ScheduleEntry::Tau(tau),
        Err(_) => ScheduleEntry::Label(schedule.trim().to_string()),
    };
    let (label, tau) = entry.resolve()?;
    let volume: f64 = volume.trim().parse().with_context(|| format!("bad volume `{volume}`"))?;
    if !(volume > 0.0) {
        bail!("volume must be positive, got {volume}");
    }
    Ok((label, tau, volume))
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            // Machine-readable failure on stderr.
            let payload = serde_json::json!({ "error": format!("{err:#}") });
            eprintln!("{payload}");
            std::process::exit(1);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { system, timeseries } => {
            let timeseries = timeseries.unwrap_or_else(|| {
                system.parent().unwrap_or_else(|| std::path::Path::new(".")).join("timeseries")
            });
            match load_system(&system, &timeseries, None) {
                Ok(network) => {
                    println!(
                        "ok: {} buses, {} generators, {} links, {} stores, {} loads, {} snapshots",
                        network.buses.len(),
                        network.generators.len(),
                        network.links.len(),
                        network.stores.len(),
                        network.loads.len(),
                        network.snapshots.count
                    );
                    Ok(0)
                }
                Err(h2flex::runner::SystemError::Invalid(report)) => {
                    eprintln!("validation failed:\n{report}");
                    Ok(2)
                }
                Err(other) => Err(other.into()),
            }
        }
        Command::Run { config } => {
            let config = ScenarioConfig::from_path(&config)?;
            let artifact = run_matrix(&config)?;
            let failed = artifact.cells.iter().filter(|c| c.status != "optimal").count();
            println!(
                "scenario `{}`: reference objective {:.6e} EUR, {} cells ({} failed), reports in {}",
                artifact.scenario,
                artifact.reference.objective,
                artifact.cells.len(),
                failed,
                config.output.display()
            );
            Ok(if failed == 0 { 0 } else { 3 })
        }
        Command::Report { artifact, format } => {
            let artifact = read_artifact(&artifact)?;
            match format {
                ReportFormat::Csv => print!("{}", render_summary_csv(&artifact)),
                ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&artifact)?),
            }
            Ok(0)
        }
        Command::Lpwrite { config, cell, path } => {
            let config = ScenarioConfig::from_path(&config)?;
            let (label, tau, volume) = parse_cell(&cell)?;
            let network = load_system(&config.system, &config.timeseries, config.wacc)?;
            let ports = if config.ports.is_empty() {
                network.export_ports()
            } else {
                config
                    .ports
                    .iter()
                    .map(|name| network.bus_by_name(name).ok_or_else(|| anyhow!("unknown port `{name}`")))
                    .collect::<Result<Vec<_>>>()?
            };
            let cap = match config.emission_cap_tons {
                Some(limit) => EmissionCap::tons(limit),
                None => EmissionCap::disabled(),
            };
            let reference = run_reference(&network, &cap, &config.tolerances)?;
            let spec = ExportSpec::new(ports, volume, tau)?;
            let policy = config.temporal_matching.then_some(&reference.profile);
            let formulation = assemble_lp(&network, Some(&spec), policy, &cap)?;
            let name = format!("{}_{}_{}", config.name, label, volume);
            write_interchange_file(&formulation.lp, &name, &path)?;
            println!(
                "wrote {} ({} rows, {} cols, {} nonzeros)",
                path.display(),
                formulation.lp.n_rows,
                formulation.lp.n_cols,
                formulation.lp.entries.len()
            );
            Ok(0)
        }
        Command::Demo { dir } => {
            h2flex::demo::write_demo(&dir)?;
            println!("demo written to {}", dir.display());
            Ok(0)
        }
    }
}
