//! Scaling schedules: capacity trajectories, resource cost, FIFO admission
//! simulation and feasibility checks.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::workload::{Config, Workload};

/// Net capacity change requested at each slot. Element `k` is the request
/// sent at slot `k + 1`; zero means no request.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    changes: Vec<i64>,
}

impl Schedule {
    /// Wraps raw changes without checking them. Use
    /// [`check_feasibility`] or [`Schedule::checked`] to vet them.
    pub fn from_changes(changes: Vec<i64>) -> Self {
        Self { changes }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            changes: vec![0; n],
        }
    }

    /// Builds a schedule that satisfies the structural invariants: length
    /// `n`, no request after `n - delta`, requests at least `delta` apart and
    /// non-negative capacity.
    pub fn checked(changes: Vec<i64>, config: &Config) -> Result<Self> {
        if changes.len() != config.n() {
            return Err(Error::LengthMismatch {
                field: "changes",
                expected: config.n(),
                found: changes.len(),
            });
        }
        let schedule = Self { changes };
        if let Some(v) = schedule
            .structural_violations(config)
            .into_iter()
            .next()
        {
            return Err(Error::InvalidConfig(format!("schedule violates {v}")));
        }
        capacity_trajectory(&schedule, config)?;
        Ok(schedule)
    }

    pub fn changes(&self) -> &[i64] {
        &self.changes
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    /// Change at 1-based slot `j`.
    pub fn at(&self, j: usize) -> i64 {
        self.changes[j - 1]
    }

    pub(crate) fn set(&mut self, j: usize, change: i64) {
        self.changes[j - 1] = change;
    }

    /// Nonzero requests as `(slot, change)` pairs, slots 1-based ascending.
    pub fn requests(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.changes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(k, &s)| (k + 1, s))
    }

    pub fn num_requests(&self) -> usize {
        self.requests().count()
    }

    fn structural_violations(&self, config: &Config) -> Vec<Violation> {
        let mut out = Vec::new();
        let slots: Vec<usize> = self.requests().map(|(j, _)| j).collect();
        for pair in slots.windows(2) {
            if pair[1] - pair[0] < config.delta() {
                out.push(Violation::Separation {
                    first: pair[0],
                    second: pair[1],
                });
            }
        }
        out.extend(
            slots
                .iter()
                .filter(|&&j| j > config.last_request_slot())
                .map(|&slot| Violation::LateRequest { slot }),
        );
        out
    }
}

/// `cap_t = sum_{j <= t - delta} s_j` without the sign check.
pub(crate) fn signed_capacity(schedule: &Schedule, config: &Config) -> Vec<i64> {
    let delta = config.delta();
    let mut cap = vec![0i64; config.n()];
    let mut acc = 0i64;
    for t in 1..=config.n() {
        if t > delta {
            acc += schedule.at(t - delta);
        }
        cap[t - 1] = acc;
    }
    cap
}

/// Provisioned capacity per slot. A request sent at slot `j` is active from
/// slot `j + delta` on.
pub fn capacity_trajectory(schedule: &Schedule, config: &Config) -> Result<Vec<u64>> {
    check_len(schedule, config)?;
    signed_capacity(schedule, config)
        .into_iter()
        .enumerate()
        .map(|(k, c)| u64::try_from(c).map_err(|_| Error::NegativeCapacity { slot: k + 1 }))
        .collect()
}

fn check_len(schedule: &Schedule, config: &Config) -> Result<()> {
    if schedule.len() != config.n() {
        return Err(Error::LengthMismatch {
            field: "changes",
            expected: config.n(),
            found: schedule.len(),
        });
    }
    Ok(())
}

/// Resource cost: every unit of net change pays for the slots remaining
/// after its activation, `sum_{j <= n - delta} s_j * (n - j - delta)`.
pub fn resource_cost(schedule: &Schedule, config: &Config) -> i64 {
    schedule
        .requests()
        .map(|(j, s)| s * config.cost_weight(j))
        .sum()
}

/// What happened to a group of participants from one arrival slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fate {
    Admitted(usize),
    /// Left the conference while still waiting.
    Departed(usize),
    /// Still waiting when the horizon ended.
    Unserved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohortOutcome {
    pub arrival_slot: usize,
    /// Participant counts and their fate, in FIFO order.
    pub parts: Vec<(u64, Fate)>,
}

impl CohortOutcome {
    fn push(&mut self, count: u64, fate: Fate) {
        match self.parts.last_mut() {
            Some((c, f)) if *f == fate => *c += count,
            _ => self.parts.push((count, fate)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    /// One entry per slot with arrivals, ascending.
    pub cohorts: Vec<CohortOutcome>,
    /// Arrival slots with a participant who waited more than `theta` slots
    /// or was never admitted.
    pub theta_violations: Vec<usize>,
    /// Slots where, after departures, capacity was below the admitted
    /// occupancy: `(slot, capacity, admitted)`.
    pub over_capacity: Vec<(usize, u64, u64)>,
    pub capacity: Vec<u64>,
}

impl SimulationReport {
    /// Waiting slots and participant counts, one pair per cohort part.
    /// Unserved participants are not included.
    pub fn waits(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.cohorts.iter().flat_map(|c| {
            c.parts.iter().filter_map(move |&(count, fate)| match fate {
                Fate::Admitted(s) | Fate::Departed(s) => Some(((s - c.arrival_slot) as u64, count)),
                Fate::Unserved => None,
            })
        })
    }

    /// Total participant-slots spent waiting.
    pub fn qos_cost(&self) -> u64 {
        self.waits().map(|(w, c)| w * c).sum()
    }

    /// Arrival slots with participants still waiting at the end.
    pub fn unserved(&self) -> Vec<(usize, u64)> {
        self.cohorts
            .iter()
            .filter_map(|c| {
                let n: u64 = c
                    .parts
                    .iter()
                    .filter(|(_, f)| *f == Fate::Unserved)
                    .map(|(k, _)| k)
                    .sum();
                (n > 0).then_some((c.arrival_slot, n))
            })
            .collect()
    }

    pub fn max_wait(&self) -> u64 {
        self.waits().map(|(w, _)| w).max().unwrap_or(0)
    }
}

/// Replays the workload against the schedule's capacity.
///
/// Within a slot, arrivals join the back of the waiting line, departures
/// remove the earliest admitted participants (then the earliest waiting ones
/// if nobody admitted is left) and finally waiting participants are admitted
/// in arrival order up to the free capacity.
pub fn simulate(workload: &Workload, schedule: &Schedule, config: &Config) -> Result<SimulationReport> {
    check_len(schedule, config)?;
    let capacity = capacity_trajectory(schedule, config)?;
    simulate_capacity(workload, &capacity, config)
}

pub(crate) fn simulate_capacity(
    workload: &Workload,
    capacity: &[u64],
    config: &Config,
) -> Result<SimulationReport> {
    if workload.len() != config.n() {
        return Err(Error::LengthMismatch {
            field: "arrivals",
            expected: config.n(),
            found: workload.len(),
        });
    }
    let theta = config.theta();
    let mut cohorts: Vec<CohortOutcome> = Vec::new();
    // (cohort index, count)
    let mut waiting: VecDeque<(usize, u64)> = VecDeque::new();
    let mut admitted: VecDeque<(usize, u64)> = VecDeque::new();
    let mut admitted_total = 0u64;
    let mut over_capacity = Vec::new();

    for t in 1..=config.n() {
        let a = workload.arrivals()[t - 1];
        if a > 0 {
            cohorts.push(CohortOutcome {
                arrival_slot: t,
                parts: Vec::new(),
            });
            waiting.push_back((cohorts.len() - 1, a));
        }

        let mut leaving = workload.departures()[t - 1];
        while leaving > 0 {
            let Some(front) = admitted.front_mut() else { break };
            let k = front.1.min(leaving);
            front.1 -= k;
            leaving -= k;
            admitted_total -= k;
            if front.1 == 0 {
                admitted.pop_front();
            }
        }
        while leaving > 0 {
            let Some(front) = waiting.front_mut() else {
                return Err(Error::ModelInconsistency {
                    slot: t,
                    detail: format!("{leaving} departures exceed the participants present"),
                });
            };
            let k = front.1.min(leaving);
            cohorts[front.0].push(k, Fate::Departed(t));
            front.1 -= k;
            leaving -= k;
            if front.1 == 0 {
                waiting.pop_front();
            }
        }

        let cap = capacity[t - 1];
        if cap < admitted_total {
            over_capacity.push((t, cap, admitted_total));
        }
        let mut free = cap.saturating_sub(admitted_total);
        while free > 0 {
            let Some(front) = waiting.front_mut() else { break };
            let k = front.1.min(free);
            cohorts[front.0].push(k, Fate::Admitted(t));
            match admitted.back_mut() {
                Some(back) if back.0 == front.0 => back.1 += k,
                _ => admitted.push_back((front.0, k)),
            }
            admitted_total += k;
            front.1 -= k;
            free -= k;
            if front.1 == 0 {
                waiting.pop_front();
            }
        }
    }
    for (idx, count) in waiting {
        cohorts[idx].push(count, Fate::Unserved);
    }

    let theta_violations = cohorts
        .iter()
        .filter(|c| {
            c.parts.iter().any(|&(_, fate)| match fate {
                Fate::Admitted(s) | Fate::Departed(s) => s - c.arrival_slot > theta,
                Fate::Unserved => true,
            })
        })
        .map(|c| c.arrival_slot)
        .collect();

    Ok(SimulationReport {
        cohorts,
        theta_violations,
        over_capacity,
        capacity: capacity.to_vec(),
    })
}

/// A broken feasibility condition. Slots are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// Two consecutive requests closer than `delta`.
    Separation { first: usize, second: usize },
    /// Request in the last `delta` slots.
    LateRequest { slot: usize },
    NegativeCapacity { slot: usize, capacity: i64 },
    /// Capacity below the participants that can no longer wait.
    MandatoryLoad { slot: usize, capacity: i64, load: u64 },
    /// Participants from `slot` waited more than `theta`.
    QosThreshold { slot: usize, wait: u64 },
    /// Participants from `slot` were never admitted.
    Unadmitted { slot: usize, count: u64 },
    /// Capacity dropped below the admitted participants.
    BelowOccupancy { slot: usize, capacity: u64, admitted: u64 },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Separation { .. } => "separation",
            Violation::LateRequest { .. } => "late-request",
            Violation::NegativeCapacity { .. } => "negative-capacity",
            Violation::MandatoryLoad { .. } => "mandatory-load",
            Violation::QosThreshold { .. } => "qos-threshold",
            Violation::Unadmitted { .. } => "unadmitted",
            Violation::BelowOccupancy { .. } => "below-occupancy",
        }
    }

    pub fn slot(&self) -> usize {
        match *self {
            Violation::Separation { first, .. } => first,
            Violation::LateRequest { slot }
            | Violation::NegativeCapacity { slot, .. }
            | Violation::MandatoryLoad { slot, .. }
            | Violation::QosThreshold { slot, .. }
            | Violation::Unadmitted { slot, .. }
            | Violation::BelowOccupancy { slot, .. } => slot,
        }
    }

    fn detail(&self) -> String {
        match self {
            Violation::Separation { first, second } => {
                format!("requests at {first} and {second} are closer than delta")
            }
            Violation::LateRequest { .. } => "request within the last delta slots".into(),
            Violation::NegativeCapacity { capacity, .. } => format!("capacity {capacity}"),
            Violation::MandatoryLoad { capacity, load, .. } => {
                format!("capacity {capacity} below mandatory load {load}")
            }
            Violation::QosThreshold { wait, .. } => format!("wait {wait} exceeds theta"),
            Violation::Unadmitted { count, .. } => {
                format!("{count} participants never admitted")
            }
            Violation::BelowOccupancy {
                capacity, admitted, ..
            } => format!("capacity {capacity} below admitted {admitted}"),
        }
    }
}

impl fmt::Display for Violation {
    /// `VIOLATION <kind> slot=<j> [slot2=<j'>] detail=<text>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VIOLATION {} slot={}", self.kind(), self.slot())?;
        if let Violation::Separation { second, .. } = self {
            write!(f, " slot2={second}")?;
        }
        write!(f, " detail={}", self.detail())
    }
}

/// Violations found by [`check_feasibility`]; empty means feasible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self) -> String {
        self.violations
            .iter()
            .map(|v| format!("{v}\n"))
            .collect()
    }
}

/// Checks request separation, the end-of-horizon request ban, non-negative
/// capacity, the mandatory load, the waiting threshold with admission of
/// everyone, and that capacity never drops below the admitted participants.
///
/// The simulation-based checks are skipped when capacity goes negative.
pub fn check_feasibility(workload: &Workload, schedule: &Schedule, config: &Config) -> Result<FeasibilityReport> {
    Ok(assess(workload, schedule, config)?.1)
}

/// Summary figures of a schedule on a workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CostReport {
    pub resource_cost: i64,
    pub qos_cost: u64,
    pub max_capacity: u64,
    pub num_requests: usize,
    pub feasible: bool,
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "resource_cost={}", self.resource_cost)?;
        writeln!(f, "qos_cost={}", self.qos_cost)?;
        writeln!(f, "max_capacity={}", self.max_capacity)?;
        writeln!(f, "num_requests={}", self.num_requests)?;
        write!(f, "feasible={}", self.feasible)
    }
}

/// Cost report plus the violations behind its `feasible` flag. A schedule
/// with negative capacity is simulated with that capacity clamped to zero.
pub fn evaluate(workload: &Workload, schedule: &Schedule, config: &Config) -> Result<(CostReport, FeasibilityReport)> {
    let (sim, report) = assess(workload, schedule, config)?;
    let signed = signed_capacity(schedule, config);
    let cost = CostReport {
        resource_cost: resource_cost(schedule, config),
        qos_cost: sim.qos_cost(),
        max_capacity: signed.iter().copied().max().unwrap_or(0).max(0) as u64,
        num_requests: schedule.num_requests(),
        feasible: report.is_feasible(),
    };
    Ok((cost, report))
}

fn assess(
    workload: &Workload,
    schedule: &Schedule,
    config: &Config,
) -> Result<(SimulationReport, FeasibilityReport)> {
    check_len(schedule, config)?;
    let mut violations = schedule.structural_violations(config);

    let signed = signed_capacity(schedule, config);
    let negative: Vec<Violation> = signed
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 0)
        .map(|(k, &capacity)| Violation::NegativeCapacity { slot: k + 1, capacity })
        .collect();
    let capacity_ok = negative.is_empty();
    violations.extend(negative);

    let load = workload.mandatory_load(config);
    violations.extend(
        signed
            .iter()
            .zip(load.values())
            .enumerate()
            .filter(|(_, (&c, &l))| c < l as i64)
            .map(|(k, (&capacity, &load))| Violation::MandatoryLoad {
                slot: k + 1,
                capacity,
                load,
            }),
    );

    let clamped: Vec<u64> = signed.iter().map(|&c| c.max(0) as u64).collect();
    let sim = simulate_capacity(workload, &clamped, config)?;
    if capacity_ok {
        let theta = config.theta() as u64;
        for c in &sim.cohorts {
            let worst = c
                .parts
                .iter()
                .filter_map(|&(_, fate)| match fate {
                    Fate::Admitted(s) | Fate::Departed(s) => Some((s - c.arrival_slot) as u64),
                    Fate::Unserved => None,
                })
                .max()
                .unwrap_or(0);
            if worst > theta {
                violations.push(Violation::QosThreshold {
                    slot: c.arrival_slot,
                    wait: worst,
                });
            }
        }
        violations.extend(
            sim.unserved()
                .into_iter()
                .map(|(slot, count)| Violation::Unadmitted { slot, count }),
        );
        violations.extend(
            sim.over_capacity
                .iter()
                .map(|&(slot, capacity, admitted)| Violation::BelowOccupancy {
                    slot,
                    capacity,
                    admitted,
                }),
        );
    }
    Ok((sim, FeasibilityReport { violations }))
}
