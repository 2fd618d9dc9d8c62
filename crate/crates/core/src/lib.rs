//! Offline planning and evaluation of elastic scaling schedules for cloud
//! conferencing.
//!
//! Given forecast arrivals and departures per time slot, a provisioning lag
//! `delta` and an acceptable join delay `theta`, the crate computes scaling
//! schedules with an adaptive heuristic ([`solvers::ads_heuristic`]), a
//! periodic greedy baseline ([`solvers::greedy`]) and an exhaustive oracle
//! for tiny instances ([`solvers::exact_oracle`]). It also builds the
//! underlying integer program, exports it in LP format and validates
//! solutions coming back from an external solver.
//!
//! Slots are numbered from 1 in every argument and report. Per-slot vectors
//! are indexed from 0, so element `k` belongs to slot `k + 1`.

pub mod compare;
pub mod error;
pub mod ilp;
pub mod io;
mod rng;
pub mod schedule;
pub mod solvers;
pub mod workload;

pub use error::{Error, Result};
pub use ilp::{IlpModel, SolutionMatrices};
pub use rng::SlotRng;
pub use schedule::{CostReport, FeasibilityReport, Schedule, SimulationReport};
pub use solvers::{Algorithm, OracleLimits};
pub use workload::{Config, MandatoryLoad, ScenarioParams, Workload};
