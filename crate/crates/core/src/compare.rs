//! Multi-seed comparison of the schedule producers with CSV output.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::schedule::CostReport;
use crate::solvers::{solve, Algorithm, OracleLimits};
use crate::workload::{generate_workload, Config, ScenarioParams, Workload};

pub const CSV_HEADER: [&str; 7] = [
    "seed",
    "algorithm",
    "resource_cost",
    "qos_cost",
    "max_capacity",
    "num_requests",
    "feasible",
];

/// A named scenario: horizon 100, lag 3, threshold 4 and the given
/// per-slot amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub n: usize,
    pub delta: usize,
    pub theta: usize,
    pub amplitude: u64,
}

pub const PRESETS: [Preset; 2] = [
    Preset {
        name: "mmog",
        n: 100,
        delta: 3,
        theta: 4,
        amplitude: 1500,
    },
    Preset {
        name: "oppd",
        n: 100,
        delta: 3,
        theta: 4,
        amplitude: 300,
    },
];

pub fn preset(name: &str) -> Option<Preset> {
    PRESETS.iter().copied().find(|p| p.name.eq_ignore_ascii_case(name))
}

impl Preset {
    pub fn config(&self) -> Config {
        Config::new(self.n, self.delta, self.theta).expect("presets are valid")
    }

    pub fn params(&self, seed: u64) -> ScenarioParams {
        ScenarioParams::new(self.name, self.amplitude, seed)
    }
}

#[derive(Debug, Clone)]
pub struct CompareSpec {
    /// Template; its seed is replaced by each seed of the range.
    pub scenario: ScenarioParams,
    pub config: Config,
    pub seeds: RangeInclusive<u64>,
    pub algorithms: Vec<Algorithm>,
    pub oracle_limits: OracleLimits,
    /// Evaluate this workload for every seed instead of generating one.
    pub workload: Option<Workload>,
}

impl CompareSpec {
    pub fn new(scenario: ScenarioParams, config: Config, seeds: RangeInclusive<u64>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            scenario,
            config,
            seeds,
            algorithms,
            oracle_limits: OracleLimits::default(),
            workload: None,
        }
    }

    pub fn with_workload(mut self, workload: Workload) -> Self {
        self.workload = Some(workload);
        self
    }

    /// Checks the spec and returns it with the oracle removed when the
    /// horizon is beyond its limits, plus a note saying so.
    pub fn normalized(&self) -> Result<(CompareSpec, Vec<String>)> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("seed range is empty".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig("no algorithm selected".into()));
        }
        let mut spec = self.clone();
        spec.algorithms.sort();
        spec.algorithms.dedup();
        let mut notes = Vec::new();
        if spec.algorithms.contains(&Algorithm::Oracle) && spec.config.n() > spec.oracle_limits.max_n {
            spec.algorithms.retain(|&a| a != Algorithm::Oracle);
            notes.push(format!(
                "oracle excluded: horizon of {} slots exceeds its limit of {}",
                spec.config.n(),
                spec.oracle_limits.max_n
            ));
            if spec.algorithms.is_empty() {
                return Err(Error::InvalidConfig(notes.pop().unwrap_or_default()));
            }
        }
        Ok((spec, notes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareRow {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub report: CostReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOutcome {
    /// Sorted by seed, then algorithm name.
    pub rows: Vec<CompareRow>,
    pub notes: Vec<String>,
}

pub fn run_compare(spec: &CompareSpec) -> Result<CompareOutcome> {
    let (spec, mut notes) = spec.normalized()?;
    let jobs: Vec<(u64, Algorithm)> = spec
        .seeds
        .clone()
        .flat_map(|seed| spec.algorithms.iter().map(move |&a| (seed, a)))
        .collect();
    let results: Vec<Result<Option<CompareRow>>> = jobs
        .par_iter()
        .map(|&(seed, algorithm)| {
            let workload = match &spec.workload {
                Some(w) => w.clone(),
                None => generate_workload(&spec.scenario.clone().with_seed(seed), &spec.config)?,
            };
            match solve(&workload, &spec.config, algorithm, &spec.oracle_limits) {
                Ok(solved) => Ok(Some(CompareRow {
                    seed,
                    algorithm,
                    report: solved.cost,
                })),
                Err(Error::OracleRefused(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut refused = Vec::new();
    for (result, &(seed, _)) in results.into_iter().zip(&jobs) {
        match result? {
            Some(row) => rows.push(row),
            None => refused.push(seed),
        }
    }
    rows.sort_by(|a, b| (a.seed, a.algorithm.name()).cmp(&(b.seed, b.algorithm.name())));
    if !refused.is_empty() {
        notes.push(format!(
            "oracle skipped for {} seed(s) beyond its limits: {:?}",
            refused.len(),
            refused
        ));
    }
    Ok(CompareOutcome { rows, notes })
}

fn median(mut values: Vec<i64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] as f64 + values[mid] as f64) / 2.0
    })
}

impl CompareOutcome {
    pub fn rows_for(&self, algorithm: Algorithm) -> impl Iterator<Item = &CompareRow> {
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }

    pub fn median_resource_cost(&self, algorithm: Algorithm) -> Option<f64> {
        median(self.rows_for(algorithm).map(|r| r.report.resource_cost).collect())
    }

    pub fn median_qos_cost(&self, algorithm: Algorithm) -> Option<f64> {
        median(self.rows_for(algorithm).map(|r| r.report.qos_cost as i64).collect())
    }

    pub fn infeasible(&self) -> usize {
        self.rows.iter().filter(|r| !r.report.feasible).count()
    }

    /// Data rows under the fixed header, then a summary block whose lines all
    /// start with `#`.
    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(CSV_HEADER).expect("in-memory write");
        for row in &self.rows {
            let r = &row.report;
            wtr.write_record([
                row.seed.to_string(),
                row.algorithm.name().to_string(),
                r.resource_cost.to_string(),
                r.qos_cost.to_string(),
                r.max_capacity.to_string(),
                r.num_requests.to_string(),
                r.feasible.to_string(),
            ])
            .expect("in-memory write");
        }
        let mut out = String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("ascii csv");

        out.push_str("# summary\n");
        out.push_str("# algorithm,runs,median_resource_cost,median_qos_cost,infeasible\n");
        let mut algorithms: Vec<Algorithm> = self.rows.iter().map(|r| r.algorithm).collect();
        algorithms.sort();
        algorithms.dedup();
        for a in algorithms {
            let runs = self.rows_for(a).count();
            let bad = self.rows_for(a).filter(|r| !r.report.feasible).count();
            out.push_str(&format!(
                "# {},{},{},{},{}\n",
                a,
                runs,
                self.median_resource_cost(a).unwrap_or(0.0),
                self.median_qos_cost(a).unwrap_or(0.0),
                bad
            ));
        }
        let bad = self.infeasible();
        if bad > 0 {
            out.push_str(&format!("# WARNING: {bad} infeasible schedule(s)\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("# note: {note}\n"));
        }
        out
    }
}
