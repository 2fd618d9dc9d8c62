//! The integer program over allocation earmarks `X`, de-allocation earmarks
//! `Y` and request flags `R`: model construction, LP export, solution
//! ingestion and exact validation.

mod lp;
mod matrices;
mod model;
mod solution;

pub use lp::export_lp;
pub use matrices::SolutionMatrices;
pub use model::{
    build_model, effective_big_m, Constraint, IlpModel, Sense, VarKind, Variable,
    DEFAULT_BIG_M,
};
pub use solution::{
    lift_schedule, matrices_to_schedule, objective_value, parse_solution, validate_solution,
    validate_solution_except, IlpViolation,
};

use std::fmt;

/// Constraint families of the model, named after the rows they generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Arrivals before `n - theta` are covered by requests sent by
    /// `i + theta - delta`.
    Eq2,
    /// Late arrivals are covered by requests sent by `n - delta`.
    Eq3,
    /// De-allocations for departures in the first `delta` slots.
    Eq4,
    /// De-allocations for later departures, requested from `i - delta` on.
    Eq5,
    /// No de-allocation for departure `i` before `i - delta`.
    Eq6,
    /// Cumulative de-allocation never exceeds cumulative allocation.
    Eq7,
    /// Active capacity covers the mandatory load.
    Eq8,
    /// At most one request in any `delta` consecutive slots.
    Eq9,
    /// Allocations only at flagged request slots.
    Eq10,
    /// De-allocations only at flagged request slots.
    Eq11,
    /// No requests in the last `delta` slots.
    Eq12,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Eq2,
        Family::Eq3,
        Family::Eq4,
        Family::Eq5,
        Family::Eq6,
        Family::Eq7,
        Family::Eq8,
        Family::Eq9,
        Family::Eq10,
        Family::Eq11,
        Family::Eq12,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Eq2 => "EQ2",
            Family::Eq3 => "EQ3",
            Family::Eq4 => "EQ4",
            Family::Eq5 => "EQ5",
            Family::Eq6 => "EQ6",
            Family::Eq7 => "EQ7",
            Family::Eq8 => "EQ8",
            Family::Eq9 => "EQ9",
            Family::Eq10 => "EQ10",
            Family::Eq11 => "EQ11",
            Family::Eq12 => "EQ12",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
