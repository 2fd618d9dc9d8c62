//! Schedule producers: the adaptive heuristic, the periodic greedy baseline
//! and the exhaustive oracle.

mod heuristics;
mod oracle;

pub use heuristics::{ads_heuristic, greedy};
pub use oracle::{exact_oracle, exact_oracle_without, OracleLimits};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ilp::{matrices_to_schedule, SolutionMatrices};
use crate::schedule::{evaluate, CostReport, FeasibilityReport, Schedule};
use crate::workload::{Config, Workload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ads,
    Greedy,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ads, Algorithm::Greedy, Algorithm::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ads => "ads",
            Algorithm::Greedy => "greedy",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ads" => Ok(Algorithm::Ads),
            "greedy" => Ok(Algorithm::Greedy),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm `{other}` (expected ads, greedy or oracle)"
            ))),
        }
    }
}

/// A schedule with its evaluation; `matrices` is set for the oracle.
#[derive(Debug, Clone)]
pub struct Solved {
    pub schedule: Schedule,
    pub cost: CostReport,
    pub feasibility: FeasibilityReport,
    pub matrices: Option<SolutionMatrices>,
}

pub fn solve(workload: &Workload, config: &Config, algorithm: Algorithm, limits: &OracleLimits) -> Result<Solved> {
    let (schedule, matrices) = match algorithm {
        Algorithm::Ads => (ads_heuristic(workload, config), None),
        Algorithm::Greedy => (greedy(workload, config), None),
        Algorithm::Oracle => {
            let (m, _) = exact_oracle(workload, config, limits)?;
            (matrices_to_schedule(&m, config), Some(m))
        }
    };
    let (cost, feasibility) = evaluate(workload, &schedule, config)?;
    Ok(Solved {
        schedule,
        cost,
        feasibility,
        matrices,
    })
}
