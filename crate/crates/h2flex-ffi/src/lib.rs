//! C ABI over the h2flex engine: opaque system handles, status codes, and a
//! thread-local last-error message.
//!
//! Every function is safe to call with null pointers (they return
//! `H2FLEX_STATUS_INVALID_ARGUMENT`). Strings are NUL-terminated UTF-8. A
//! negative `wacc` or `emission_cap_tons` selects the built-in default /
//! disables the cap.

use h2flex::analysis::{delivery_schedule, take_off_price};
use h2flex::formulation::assemble_lp;
use h2flex::model::{EmissionCap, ExportSpec, Network};
use h2flex::runner::{load_system, run_reference, ReferenceRun};
use h2flex::solver::{solve, write_interchange_file, SolveStatus, Tolerances};
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::path::Path;
use std::sync::Mutex;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
}

/// Outcome of an FFI call.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum H2flexStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    ValidationFailed = 3,
    Infeasible = 4,
    Unbounded = 5,
    IterationLimit = 6,
    InternalError = 7,
}

/// Opaque handle to a loaded system; create with `h2flex_system_load` or
/// `h2flex_system_demo`, release with `h2flex_system_free`.
pub struct H2flexSystem {
    network: Network,
    /// Reference runs cached per emission-cap setting.
    reference_cache: Mutex<Vec<(u64, std::sync::Arc<ReferenceRun>)>>,
}

/// Key results of one export cell solve.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default)]
pub struct H2flexCellResult {
    /// Total system cost, EUR per year.
    pub objective_eur: f64,
    /// Offtake-weighted dual price at the export bus, EUR/MWh.
    pub take_off_price_eur_per_mwh: f64,
    /// Variance of the delivery schedule, MW^2.
    pub schedule_variance_mw2: f64,
    /// Delivered energy, MWh; equals the requested volume when feasible.
    pub total_delivered_mwh: f64,
    /// Interior-point iterations of the cell solve.
    pub iterations: u32,
}

unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, H2flexStatus> {
    if ptr.is_null() {
        set_error(format!("{name} must not be null"));
        return Err(H2flexStatus::InvalidArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error(format!("{name} must be valid UTF-8"));
        H2flexStatus::InvalidArgument
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn h2flex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message of this thread into `buffer` (truncated to
/// `capacity - 1` bytes, always NUL-terminated) and returns the full message
/// length in bytes. A null or empty buffer only queries the length.
///
/// # Safety
/// `buffer` must point to at least `capacity` writable bytes, or be null.
#[no_mangle]
pub unsafe extern "C" fn h2flex_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let message = e.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr(), buffer as *mut u8, n);
                *buffer.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Loads a system TOML file plus its profile CSV directory. `wacc < 0` keeps
/// the system-file default. On success stores a new handle in `out`.
///
/// # Safety
/// `system_path` and `timeseries_dir` must be NUL-terminated strings and
/// `out` a valid pointer; all may be null, which is reported as an error.
#[no_mangle]
pub unsafe extern "C" fn h2flex_system_load(
    system_path: *const c_char,
    timeseries_dir: *const c_char,
    wacc: f64,
    out: *mut *mut H2flexSystem,
) -> H2flexStatus {
    if out.is_null() {
        set_error("out must not be null");
        return H2flexStatus::InvalidArgument;
    }
    let system_path = match unsafe { str_arg(system_path, "system_path") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let timeseries_dir = match unsafe { str_arg(timeseries_dir, "timeseries_dir") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let wacc_override = if wacc >= 0.0 { Some(wacc) } else { None };
    match load_system(Path::new(system_path), Path::new(timeseries_dir), wacc_override) {
        Ok(network) => {
            let handle = Box::new(H2flexSystem { network, reference_cache: Mutex::new(Vec::new()) });
            unsafe { *out = Box::into_raw(handle) };
            H2flexStatus::Ok
        }
        Err(h2flex::runner::SystemError::Invalid(report)) => {
            set_error(report);
            H2flexStatus::ValidationFailed
        }
        Err(err) => {
            set_error(err.to_string());
            H2flexStatus::ParseError
        }
    }
}

/// Builds the bundled demo benchmark in memory.
///
/// # Safety
/// `out` must be a valid pointer or null.
#[no_mangle]
pub unsafe extern "C" fn h2flex_system_demo(out: *mut *mut H2flexSystem) -> H2flexStatus {
    if out.is_null() {
        set_error("out must not be null");
        return H2flexStatus::InvalidArgument;
    }
    match h2flex::demo::network() {
        Ok(network) => {
            let handle = Box::new(H2flexSystem { network, reference_cache: Mutex::new(Vec::new()) });
            unsafe { *out = Box::into_raw(handle) };
            H2flexStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            H2flexStatus::InternalError
        }
    }
}

/// Releases a system handle; null is a no-op.
///
/// # Safety
/// `system` must be a handle obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn h2flex_system_free(system: *mut H2flexSystem) {
    if !system.is_null() {
        drop(unsafe { Box::from_raw(system) });
    }
}

/// Number of validation violations (0 means well-formed), or -1 on null.
///
/// # Safety
/// `system` must be a live handle from this library, or null.
#[no_mangle]
pub unsafe extern "C" fn h2flex_system_validate(system: *const H2flexSystem) -> i32 {
    let Some(system) = (unsafe { system.as_ref() }) else {
        set_error("system must not be null");
        return -1;
    };
    let violations = system.network.validate();
    if !violations.is_empty() {
        set_error(violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"));
    }
    violations.len() as i32
}

fn cap_of(emission_cap_tons: f64) -> EmissionCap {
    if emission_cap_tons >= 0.0 {
        EmissionCap::tons(emission_cap_tons)
    } else {
        EmissionCap::disabled()
    }
}

fn reference_for(
    system: &H2flexSystem,
    cap: &EmissionCap,
) -> Result<std::sync::Arc<ReferenceRun>, H2flexStatus> {
    let key = cap.limit.map(f64::to_bits).unwrap_or(u64::MAX);
    let mut cache = system.reference_cache.lock().unwrap();
    if let Some((_, cached)) = cache.iter().find(|(k, _)| *k == key) {
        return Ok(cached.clone());
    }
    match run_reference(&system.network, cap, &Tolerances::default()) {
        Ok(reference) => {
            let reference = std::sync::Arc::new(reference);
            cache.push((key, reference.clone()));
            Ok(reference)
        }
        Err(err) => {
            set_error(err.to_string());
            Err(H2flexStatus::Infeasible)
        }
    }
}

fn solve_cell(
    system: &H2flexSystem,
    tau: f64,
    volume_mwh: f64,
    temporal_matching: bool,
    emission_cap_tons: f64,
) -> Result<(h2flex::formulation::Formulation, h2flex::solver::LpSolution), H2flexStatus> {
    let ports = system.network.export_ports();
    let spec = ExportSpec::new(ports, volume_mwh, tau).map_err(|err| {
        set_error(err.to_string());
        H2flexStatus::InvalidArgument
    })?;
    let cap = cap_of(emission_cap_tons);
    let reference = reference_for(system, &cap)?;
    let policy = temporal_matching.then_some(&reference.profile);
    let formulation = assemble_lp(&system.network, Some(&spec), policy, &cap).map_err(|err| {
        set_error(err.to_string());
        H2flexStatus::InvalidArgument
    })?;
    let solution = solve(&formulation.lp, &Tolerances::default()).map_err(|err| {
        set_error(err.to_string());
        H2flexStatus::InternalError
    })?;
    match solution.status {
        SolveStatus::Optimal => Ok((formulation, solution)),
        SolveStatus::Infeasible => {
            set_error(solution.note.unwrap_or_else(|| "infeasible".into()));
            Err(H2flexStatus::Infeasible)
        }
        SolveStatus::Unbounded => {
            set_error(solution.note.unwrap_or_else(|| "unbounded".into()));
            Err(H2flexStatus::Unbounded)
        }
        SolveStatus::IterationLimit => {
            set_error(solution.note.unwrap_or_else(|| "iteration limit".into()));
            Err(H2flexStatus::IterationLimit)
        }
    }
}

/// Solves one export cell (reference run included and cached) and fills
/// `result` with the objective, take-off price and schedule summary.
///
/// # Safety
/// `system` must be a live handle and `result` writable; both may be null,
/// which is reported as an error.
#[no_mangle]
pub unsafe extern "C" fn h2flex_price_cell(
    system: *const H2flexSystem,
    tau: f64,
    volume_mwh: f64,
    temporal_matching: bool,
    emission_cap_tons: f64,
    result: *mut H2flexCellResult,
) -> H2flexStatus {
    let Some(system) = (unsafe { system.as_ref() }) else {
        set_error("system must not be null");
        return H2flexStatus::InvalidArgument;
    };
    if result.is_null() {
        set_error("result must not be null");
        return H2flexStatus::InvalidArgument;
    }
    match solve_cell(system, tau, volume_mwh, temporal_matching, emission_cap_tons) {
        Ok((formulation, solution)) => {
            let price = match take_off_price(&solution, &formulation) {
                Ok(report) => report,
                Err(err) => {
                    set_error(err.to_string());
                    return H2flexStatus::InternalError;
                }
            };
            let schedule = match delivery_schedule(&solution, &formulation) {
                Ok(schedule) => schedule,
                Err(err) => {
                    set_error(err.to_string());
                    return H2flexStatus::InternalError;
                }
            };
            unsafe {
                *result = H2flexCellResult {
                    objective_eur: solution.objective.unwrap_or(f64::NAN),
                    take_off_price_eur_per_mwh: price.take_off_price,
                    schedule_variance_mw2: schedule.variance,
                    total_delivered_mwh: schedule.total_mwh,
                    iterations: solution.iterations as u32,
                };
            }
            H2flexStatus::Ok
        }
        Err(status) => status,
    }
}

/// Writes the LP of one export cell to `path` in MPS interchange form.
///
/// # Safety
/// `system` must be a live handle and `path` a NUL-terminated string; both
/// may be null, which is reported as an error.
#[no_mangle]
pub unsafe extern "C" fn h2flex_write_mps(
    system: *const H2flexSystem,
    tau: f64,
    volume_mwh: f64,
    temporal_matching: bool,
    emission_cap_tons: f64,
    path: *const c_char,
) -> H2flexStatus {
    let Some(system) = (unsafe { system.as_ref() }) else {
        set_error("system must not be null");
        return H2flexStatus::InvalidArgument;
    };
    let path = match unsafe { str_arg(path, "path") } {
        Ok(p) => p,
        Err(status) => return status,
    };
    let ports = system.network.export_ports();
    let spec = match ExportSpec::new(ports, volume_mwh, tau) {
        Ok(spec) => spec,
        Err(err) => {
            set_error(err.to_string());
            return H2flexStatus::InvalidArgument;
        }
    };
    let cap = cap_of(emission_cap_tons);
    let reference = match temporal_matching {
        true => match reference_for(system, &cap) {
            Ok(reference) => Some(reference),
            Err(status) => return status,
        },
        false => None,
    };
    let formulation =
        match assemble_lp(&system.network, Some(&spec), reference.as_ref().map(|r| &r.profile), &cap) {
            Ok(f) => f,
            Err(err) => {
                set_error(err.to_string());
                return H2flexStatus::InvalidArgument;
            }
        };
    match write_interchange_file(&formulation.lp, "h2flex_cell", path) {
        Ok(()) => H2flexStatus::Ok,
        Err(err) => {
            set_error(err.to_string());
            H2flexStatus::InternalError
        }
    }
}
