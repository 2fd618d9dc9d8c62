use std::collections::{HashMap, HashSet};
use std::fmt;

use super::model::{IlpModel, VarKind};
use super::{Family, SolutionMatrices};
use crate::error::{Error, Result};
use crate::schedule::{signed_capacity, Schedule};
use crate::workload::{prefix_sums, Config, Workload};

const INTEGRALITY_TOLERANCE: f64 = 1e-6;

/// Reads `<name> <value>` lines (`#` starts a comment). Unlisted variables
/// are zero; values are rounded to the nearest integer within `1e-6`.
pub fn parse_solution(text: &str, model: &IlpModel) -> Result<SolutionMatrices> {
    let index: HashMap<&str, usize> = model
        .variables
        .iter()
        .enumerate()
        .map(|(k, v)| (v.name.as_str(), k))
        .collect();
    let n = model.n;
    let mut m = SolutionMatrices::zeros(n);
    let mut seen = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Syntax(format!(
                "line {}: expected `<name> <value>`",
                lineno + 1
            )));
        };
        let &var = index
            .get(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        if !seen.insert(var) {
            return Err(Error::Syntax(format!(
                "line {}: `{name}` listed twice",
                lineno + 1
            )));
        }
        let value: f64 = value.parse().map_err(|_| {
            Error::Syntax(format!("line {}: bad value `{value}`", lineno + 1))
        })?;
        let rounded = value.round();
        if !value.is_finite() || (value - rounded).abs() > INTEGRALITY_TOLERANCE {
            return Err(Error::NonIntegral {
                name: name.to_string(),
                value,
            });
        }
        if rounded < 0.0 {
            return Err(Error::NegativeValue {
                name: name.to_string(),
                value,
            });
        }
        let v = rounded as u64;
        let nn = n * n;
        match model.variables[var].kind {
            VarKind::Binary => {
                if v > 1 {
                    return Err(Error::NotBinary {
                        name: name.to_string(),
                        value,
                    });
                }
                m.set_r(var - 2 * nn + 1, v == 1);
            }
            VarKind::Integer if var < nn => m.set_x(var / n + 1, var % n + 1, v),
            VarKind::Integer => m.set_y((var - nn) / n + 1, (var - nn) % n + 1, v),
        }
    }
    Ok(m)
}

/// A violated row: family, the row's indices and both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IlpViolation {
    pub family: Family,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub lhs: i64,
    pub rhs: i64,
}

impl fmt::Display for IlpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VIOLATION {}", self.family)?;
        if let Some(i) = self.i {
            write!(f, " i={i}")?;
        }
        if let Some(j) = self.j {
            write!(f, " j={j}")?;
        }
        write!(f, " lhs={} rhs={}", self.lhs, self.rhs)
    }
}

/// Evaluates every constraint family exactly; empty means feasible.
///
/// The linking rows are checked in their logical form (a positive earmark at
/// `j` needs `r_j = 1`), which is what any sufficiently large big-M encodes.
pub fn validate_solution(m: &SolutionMatrices, workload: &Workload, config: &Config) -> Vec<IlpViolation> {
    validate_solution_except(m, workload, config, &[])
}

/// Like [`validate_solution`] but ignoring the listed families.
pub fn validate_solution_except(
    m: &SolutionMatrices,
    workload: &Workload,
    config: &Config,
    skip: &[Family],
) -> Vec<IlpViolation> {
    let n = config.n();
    assert_eq!(m.n(), n, "matrix size does not match the horizon");
    assert_eq!(workload.len(), n, "workload length does not match the horizon");
    let delta = config.delta();
    let theta = config.theta();
    let last = n - delta;
    let a = workload.arrivals();
    let d = workload.departures();
    let mut ck = Checker {
        skip,
        out: Vec::new(),
    };

    let x_sum = |i: usize, lo: usize, hi: usize| (lo..=hi).map(|j| m.x(i, j) as i64).sum::<i64>();
    let y_sum = |i: usize, lo: usize, hi: usize| (lo..=hi).map(|j| m.y(i, j) as i64).sum::<i64>();
    // Net allocation requested up to and including slot `upto`.
    let cum_net = {
        let mut acc = vec![0i64; n + 1];
        for j in 1..=n {
            acc[j] = acc[j - 1] + m.x_column_sum(j) as i64 - m.y_column_sum(j) as i64;
        }
        acc
    };

    for i in 1..=n - theta {
        ck.check(Family::Eq2, Some(i), None, x_sum(i, 1, i + theta - delta), Cmp::Ge, a[i - 1]);
    }
    for i in n - theta + 1..=n {
        ck.check(Family::Eq3, Some(i), None, x_sum(i, 1, last), Cmp::Ge, a[i - 1]);
    }
    for i in 1..=delta {
        ck.check(Family::Eq4, Some(i), None, y_sum(i, 1, last), Cmp::Le, d[i - 1]);
    }
    for i in delta + 1..=n {
        ck.check(Family::Eq5, Some(i), None, y_sum(i, i - delta, last), Cmp::Le, d[i - 1]);
    }
    for i in delta + 2..=n {
        ck.check(Family::Eq6, Some(i), None, y_sum(i, 1, i - delta - 1), Cmp::Eq, 0);
    }
    for (j, &net) in cum_net.iter().enumerate().skip(1) {
        ck.check(Family::Eq7, None, Some(j), net, Cmp::Ge, 0);
    }
    let load = workload.mandatory_load(config);
    for j in delta + 1..=n {
        ck.check(Family::Eq8, None, Some(j), cum_net[j - delta], Cmp::Ge, load.at(j));
    }
    for i in 1..=last {
        let flags = (i..i + delta).filter(|&j| m.r(j)).count() as i64;
        ck.check(Family::Eq9, Some(i), None, flags, Cmp::Le, 1);
    }
    for (family, is_y) in [(Family::Eq10, false), (Family::Eq11, true)] {
        for i in 1..=n {
            for j in 1..=n {
                let v = if is_y { m.y(i, j) } else { m.x(i, j) };
                if v > 0 && !m.r(j) {
                    ck.push(family, Some(i), Some(j), v as i64, 0);
                }
            }
        }
    }
    for j in last + 1..=n {
        ck.check(Family::Eq12, None, Some(j), m.r(j) as i64, Cmp::Eq, 0);
    }
    ck.out
}

#[derive(Clone, Copy)]
enum Cmp {
    Ge,
    Le,
    Eq,
}

struct Checker<'a> {
    skip: &'a [Family],
    out: Vec<IlpViolation>,
}

impl Checker<'_> {
    fn check(&mut self, family: Family, i: Option<usize>, j: Option<usize>, lhs: i64, cmp: Cmp, rhs: u64) {
        let rhs = rhs as i64;
        let ok = match cmp {
            Cmp::Ge => lhs >= rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
        };
        if !ok {
            self.push(family, i, j, lhs, rhs);
        }
    }

    fn push(&mut self, family: Family, i: Option<usize>, j: Option<usize>, lhs: i64, rhs: i64) {
        if !self.skip.contains(&family) {
            self.out.push(IlpViolation { family, i, j, lhs, rhs });
        }
    }
}

/// `sum_i sum_{j <= n - delta} (x_ij - y_ij) * (n - j - delta)`.
pub fn objective_value(m: &SolutionMatrices, config: &Config) -> i64 {
    (1..=config.last_request_slot())
        .map(|j| (m.x_column_sum(j) as i64 - m.y_column_sum(j) as i64) * config.cost_weight(j))
        .sum()
}

/// Column net changes `sum_i x_ij - sum_i y_ij` as a schedule. Defined for
/// any matrices; only a valid solution is guaranteed to give a feasible
/// schedule.
pub fn matrices_to_schedule(m: &SolutionMatrices, config: &Config) -> Schedule {
    assert_eq!(m.n(), config.n(), "matrix size does not match the horizon");
    m.net_changes()
}

/// Earmarks a schedule's requests to arrival and departure cohorts.
///
/// Zero-net requests may be added where arrivals would otherwise miss their
/// deadline. Which slots to add them at is chosen by a dynamic program over
/// request positions: for a fixed set of requests the cheapest plan keeps
/// the cumulative de-allocation as small as possible (a request releases
/// what its net change needs, plus what covers arrivals due before the next
/// request), and a smaller cumulative de-allocation never hurts later, so
/// keeping the minimum per position is exact. Fails only when no matrices
/// with these column net changes exist. Both cohorts are served FIFO and the
/// objective equals the schedule's resource cost.
pub fn lift_schedule(schedule: &Schedule, workload: &Workload, config: &Config) -> Result<SolutionMatrices> {
    let n = config.n();
    let delta = config.delta();
    let theta = config.theta();
    let last = config.last_request_slot();
    if schedule.len() != n {
        return Err(Error::LengthMismatch {
            field: "changes",
            expected: n,
            found: schedule.len(),
        });
    }
    let capacity = signed_capacity(schedule, config);
    if let Some((k, _)) = capacity.iter().enumerate().find(|(_, &c)| c < 0) {
        return Err(Error::NegativeCapacity { slot: k + 1 });
    }
    let reals: Vec<usize> = schedule.requests().map(|(j, _)| j).collect();
    if let Some(&j) = reals.iter().find(|&&j| j > last) {
        return Err(Error::Infeasible(format!("request at slot {j} takes effect after the horizon")));
    }
    if let Some(w) = reals.windows(2).find(|w| w[1] - w[0] < delta) {
        return Err(Error::Infeasible(format!(
            "requests at slots {} and {} are closer than {delta} slots",
            w[0], w[1]
        )));
    }

    let deadline = |i: usize| if i + theta <= n { i + theta - delta } else { last };
    let cum_a = prefix_sums(workload.arrivals());
    let cum_d = prefix_sums(workload.departures());
    let mut cum_s = vec![0i64; n + 1];
    for j in 1..=n {
        cum_s[j] = cum_s[j - 1] + schedule.at(j);
    }
    // Arrivals that must be earmarked before a request at `q` (all of them
    // when no request follows).
    let due = |q: Option<usize>| match q {
        Some(q) => cum_a[(1..=n).take_while(|&i| deadline(i) < q).last().unwrap_or(0)],
        None => cum_a[n],
    };
    // Slots the request after `p` may take: anything up to `delta` before
    // the next scheduled request, or that request itself.
    let successors = |p: Option<usize>| -> Vec<Option<usize>> {
        let lower = p.map_or(1, |p| p + delta);
        match reals.iter().copied().find(|&r| p.is_none_or(|p| r > p)) {
            Some(r) => (lower..=r.saturating_sub(delta)).chain([r]).map(Some).collect(),
            None => (lower..=last).map(Some).chain([None]).collect(),
        }
    };

    // best[p]: smallest cumulative de-allocation before a request at `p`,
    // with the previous request slot.
    let mut best: Vec<Option<(u64, Option<usize>)>> = vec![None; last + 1];
    let mut finish: Option<(u64, usize)> = None;
    for q in successors(None) {
        if due(q) > 0 {
            continue;
        }
        match q {
            Some(q) => best[q] = best[q].or(Some((0, None))),
            None => return Ok(SolutionMatrices::zeros(n)),
        }
    }
    for p in 1..=last {
        let Some((before, _)) = best[p] else { continue };
        let change = schedule.at(p);
        let net = cum_s[p] as u64;
        for q in successors(Some(p)) {
            let after = (before + change.min(0).unsigned_abs()).max(due(q).saturating_sub(net));
            if after > cum_d[p + delta] {
                continue;
            }
            match q {
                Some(q) => {
                    if best[q].is_none_or(|(g, _)| after < g) {
                        best[q] = Some((after, Some(p)));
                    }
                }
                None => {
                    if finish.is_none_or(|(g, _)| after < g) {
                        finish = Some((after, p));
                    }
                }
            }
        }
    }
    let Some((total, end)) = finish else {
        return Err(Error::Infeasible(
            "no earmarking of arrivals and departures matches this schedule".into(),
        ));
    };

    // Walk back to list (slot, cumulative de-allocation after it).
    let mut plan = vec![(end, total)];
    let mut p = end;
    while let Some((before, Some(prev))) = best[p] {
        plan.push((prev, before));
        p = prev;
    }
    plan.reverse();

    let a = workload.arrivals();
    let d = workload.departures();
    let mut m = SolutionMatrices::zeros(n);
    // FIFO cursors: (slot, amount still to earmark).
    let mut arr = (1usize, a.first().copied().unwrap_or(0));
    let mut dep = (1usize, d.first().copied().unwrap_or(0));
    let advance = |cursor: &mut (usize, u64), counts: &[u64]| {
        while cursor.1 == 0 && cursor.0 < n {
            cursor.0 += 1;
            cursor.1 = counts[cursor.0 - 1];
        }
    };
    let mut deallocated = 0u64;
    for (j, after) in plan {
        let y_total = after - deallocated;
        let x_total = (schedule.at(j) + y_total as i64) as u64;
        deallocated = after;
        let mut left = y_total;
        while left > 0 {
            advance(&mut dep, d);
            let k = dep.1.min(left);
            m.add_y(dep.0, j, k);
            dep.1 -= k;
            left -= k;
        }
        let mut left = x_total;
        while left > 0 {
            advance(&mut arr, a);
            if arr.1 == 0 {
                // Past the last arrival: park the surplus on the final row.
                m.add_x(arr.0, j, left);
                break;
            }
            let k = arr.1.min(left);
            m.add_x(arr.0, j, k);
            arr.1 -= k;
            left -= k;
        }
        m.set_r(j, true);
    }
    Ok(m)
}
