//! Multi-carrier energy-system optimization engine for pricing hydrogen
//! export delivery schedules.
//!
//! The crate builds capacity-expansion + dispatch linear programs from an
//! immutable [`model::Network`], adds an export buffer of configurable
//! flexibility and a monthly renewable-matching policy, solves them with a
//! built-in interior-point method, and reads hydrogen take-off prices out of
//! the LP duals.

pub mod analysis;
pub mod demo;
pub mod formulation;
pub mod model;
pub mod runner;
pub mod solver;
