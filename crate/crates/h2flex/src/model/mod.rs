//! Immutable multi-carrier network data model.
//!
//! A [`Network`] is the single description of the physical system: buses per
//! energy carrier, generators, directed links (conversion and transport),
//! energy stores, and fixed loads, all resolved on a shared snapshot axis.
//! Construction is plain data assembly; [`Network::validate`] reports every
//! structural violation instead of failing fast so that callers can surface
//! all problems of an input file at once.

mod annuity;
mod export;
mod network;

pub use annuity::{annuitize, AnnuityError};
pub use export::{buffer_capacity, EmissionCap, ExportSpec, ExportSpecError};
pub use network::{
    Bus, BusId, Carrier, CarrierId, Generator, GeneratorId, Link, LinkId, Load, LoadId, Network,
    SnapshotSet, Store, StoreId, Violation,
};
