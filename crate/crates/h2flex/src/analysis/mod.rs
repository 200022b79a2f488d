//! Result extraction: take-off prices from duals, delivery schedules from
//! port feed flows, cost breakdowns between paired runs, and an independent
//! verification of claimed-optimal solutions.

mod breakdown;
mod price;
mod schedule;
mod verify;

pub use breakdown::{cost_breakdown, ClassDelta, CostBreakdown};
pub use price::{finite_difference_price, take_off_price, PriceReport};
pub use schedule::{delivery_schedule, DeliverySchedule};
pub use verify::{verify_solution, Check, VerificationReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("operation requires an export formulation")]
    MissingExport,
    #[error("solution is not optimal (status {0:?})")]
    NotOptimal(crate::solver::SolveStatus),
    #[error("snapshot sets differ between the paired runs")]
    SnapshotMismatch,
    #[error("re-solve for the finite-difference check failed: {0}")]
    ResolveFailed(String),
}
