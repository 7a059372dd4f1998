//! Bicriteria repairman approximation for time windows with lengths in `[1, 2)`.
//!
//! The crate has two halves. The algorithmic half trims windows onto period
//! grids ([`trimming`]), solves each trimmed instance exactly at a given
//! speedup ([`speedup`]), and keeps the best of the 22 trimmings
//! ([`w12`]). An exhaustive search ([`oracle`]) provides ground truth on
//! small instances.
//!
//! The analytic half rebuilds the coverage tables of run ensembles and the
//! minimum-yield inequalities over them ([`coverage`]), and evaluates the
//! fraction bounds, the max-min linear program and the ratio curve
//! ([`bounds`]). Everything is exact: see [`Rational`].

pub mod bounds;
pub mod coverage;
mod error;
#[cfg(test)]
mod invariants;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod speedup;
pub mod trimming;
pub mod w12;

pub use error::{Error, Result};
pub use model::{
    validate_instance, validate_run, Edge, Instance, MetricKind, NodeId, RequestId, RunEvent,
    ServiceRequest, ServiceRun, TimeWindow, Violation,
};
pub use rational::{q, ParseRationalError, Rational};

/// Default number of requests the exact solvers accept per period (or in
/// total, for the oracle).
pub const DEFAULT_CAP: usize = 10;
