//! Exhaustive minimum-cost solver for tiny instances.
//!
//! For every admissible set of request slots, allocation rows (each arrival
//! cohort split exactly over the request slots before its deadline) and
//! de-allocation rows (each departure cohort split, up to its size, over the
//! request slots from `i - delta` on) are enumerated one row at a time.
//! Partial assignments with identical column sums are merged, keeping the
//! lexicographically smallest prefix: the remaining rows cannot tell them
//! apart and the cumulative rows only see column sums, so no optimum is lost
//! and the lexicographic tie-break is preserved. Every surviving candidate
//! that could improve on the incumbent is checked with
//! [`validate_solution_except`].

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::ilp::{objective_value, validate_solution_except, Family, SolutionMatrices};
use crate::workload::{Config, Workload};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_n: usize,
    /// Bound on the total number of arrivals.
    pub max_total_participants: u64,
    pub time_budget: Duration,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_n: 10,
            max_total_participants: 8,
            time_budget: Duration::from_secs(60),
        }
    }
}

impl OracleLimits {
    pub fn admits(&self, workload: &Workload, config: &Config) -> Result<()> {
        if config.n() > self.max_n {
            return Err(Error::OracleRefused(format!(
                "horizon of {} slots exceeds the limit of {}",
                config.n(),
                self.max_n
            )));
        }
        let total = workload.total_arrivals();
        if total > self.max_total_participants {
            return Err(Error::OracleRefused(format!(
                "{total} participants exceed the limit of {}",
                self.max_total_participants
            )));
        }
        Ok(())
    }
}

/// Minimum-objective solution and its cost. Ties go to the
/// lexicographically smallest `(X, Y, R)`.
pub fn exact_oracle(workload: &Workload, config: &Config, limits: &OracleLimits) -> Result<(SolutionMatrices, i64)> {
    exact_oracle_without(workload, config, limits, &[])
}

/// Same search with the cumulative families in `relax` (only [`Family::Eq7`]
/// and [`Family::Eq8`] may be relaxed) left unchecked.
pub fn exact_oracle_without(
    workload: &Workload,
    config: &Config,
    limits: &OracleLimits,
    relax: &[Family],
) -> Result<(SolutionMatrices, i64)> {
    if let Some(f) = relax.iter().find(|f| !matches!(f, Family::Eq7 | Family::Eq8)) {
        return Err(Error::InvalidConfig(format!(
            "{f} shapes the search space and cannot be relaxed"
        )));
    }
    limits.admits(workload, config)?;
    let started = Instant::now();
    let n = config.n();
    let delta = config.delta();
    let theta = config.theta();
    let last = config.last_request_slot();
    let check_eq7 = !relax.contains(&Family::Eq7);
    let check_eq8 = !relax.contains(&Family::Eq8);
    let load = workload.mandatory_load(config);
    let deadline = |i: usize| if i + theta <= n { i + theta - delta } else { last };

    let mut best: Option<Incumbent> = None;
    for slots in request_sets(last, delta) {
        if started.elapsed() > limits.time_budget {
            return Err(Error::OracleRefused(format!(
                "time budget of {:?} exhausted",
                limits.time_budget
            )));
        }
        let Some(xs) = enumerate_rows(n, &slots, workload.arrivals(), |i, j| j <= deadline(i), true) else {
            continue;
        };
        let ys = enumerate_rows(
            n,
            &slots,
            workload.departures(),
            |i, j| j + delta >= i,
            false,
        )
        .expect("de-allocation rows may stay empty");
        let mut r = vec![false; n];
        for &j in &slots {
            r[j - 1] = true;
        }
        let weights: Vec<i64> = slots.iter().map(|&j| config.cost_weight(j)).collect();
        let weigh = |cols: &[u64]| -> i64 { cols.iter().zip(&weights).map(|(&c, &w)| c as i64 * w).sum() };
        let mut ys: Vec<(i64, &Vec<u64>, &Vec<u64>)> = ys.iter().map(|(c, m)| (weigh(c), c, m)).collect();
        // Largest release first so the cost cut-off below can stop early.
        ys.sort_by_key(|y| std::cmp::Reverse(y.0));

        for (x_cols, x_mat) in &xs {
            let x_cost = weigh(x_cols);
            for &(y_gain, y_cols, y_mat) in &ys {
                let cost = x_cost - y_gain;
                if let Some(b) = &best {
                    if cost > b.cost {
                        break;
                    }
                    if cost == b.cost && (x_mat, y_mat, &r) >= (&b.x, &b.y, &b.r) {
                        continue;
                    }
                }
                if !cumulative_ok(&slots, x_cols, y_cols, n, delta, check_eq7, check_eq8, |j| load.at(j)) {
                    continue;
                }
                let m = assemble(n, x_mat, y_mat, &r);
                let violations = validate_solution_except(&m, workload, config, relax);
                if !violations.is_empty() {
                    return Err(Error::Internal(format!(
                        "oracle candidate fails validation: {}",
                        violations[0]
                    )));
                }
                debug_assert_eq!(objective_value(&m, config), cost);
                best = Some(Incumbent {
                    cost,
                    x: x_mat.clone(),
                    y: y_mat.clone(),
                    r: r.clone(),
                });
            }
        }
    }
    let best = best.ok_or_else(|| Error::Infeasible("no assignment satisfies the model".into()))?;
    Ok((assemble(n, &best.x, &best.y, &best.r), best.cost))
}

struct Incumbent {
    cost: i64,
    x: Vec<u64>,
    y: Vec<u64>,
    r: Vec<bool>,
}

fn assemble(n: usize, x: &[u64], y: &[u64], r: &[bool]) -> SolutionMatrices {
    let mut m = SolutionMatrices::zeros(n);
    for i in 1..=n {
        for j in 1..=n {
            m.set_x(i, j, x[(i - 1) * n + j - 1]);
            m.set_y(i, j, y[(i - 1) * n + j - 1]);
        }
        m.set_r(i, r[i - 1]);
    }
    m
}

/// Cumulative allocation never below de-allocation, and active capacity at
/// every `j > delta` at least the mandatory load.
#[allow(clippy::too_many_arguments)]
fn cumulative_ok(
    slots: &[usize],
    x_cols: &[u64],
    y_cols: &[u64],
    n: usize,
    delta: usize,
    check_eq7: bool,
    check_eq8: bool,
    load: impl Fn(usize) -> u64,
) -> bool {
    // Net requested up to each slot.
    let mut net = vec![0i64; n + 1];
    let mut k = 0;
    for j in 1..=n {
        net[j] = net[j - 1];
        if k < slots.len() && slots[k] == j {
            net[j] += x_cols[k] as i64 - y_cols[k] as i64;
            k += 1;
        }
    }
    if check_eq7 && net.iter().any(|&v| v < 0) {
        return false;
    }
    if check_eq8 && (delta + 1..=n).any(|j| net[j - delta] < load(j) as i64) {
        return false;
    }
    true
}

/// Sets of request slots in `1..=last` at least `delta` apart, in
/// lexicographic order of their 0/1 indicator vectors.
fn request_sets(last: usize, delta: usize) -> Vec<Vec<usize>> {
    fn rec(from: usize, last: usize, delta: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for j in from..=last {
            cur.push(j);
            rec(j + delta, last, delta, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, last, delta, &mut Vec::new(), &mut out);
    out
}

/// Column sums over `slots` mapped to the lexicographically smallest
/// `n x n` matrix reaching them. Row `i` spreads `counts[i]` (exactly when
/// `exact`, otherwise at most) over the slots accepted by `admissible`.
/// `None` when some row cannot be placed.
fn enumerate_rows(
    n: usize,
    slots: &[usize],
    counts: &[u64],
    admissible: impl Fn(usize, usize) -> bool,
    exact: bool,
) -> Option<BTreeMap<Vec<u64>, Vec<u64>>> {
    let mut states: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    states.insert(vec![0; slots.len()], vec![0; n * n]);
    for i in 1..=n {
        let c = counts[i - 1];
        if c == 0 {
            continue;
        }
        let cols: Vec<usize> = (0..slots.len()).filter(|&k| admissible(i, slots[k])).collect();
        if cols.is_empty() {
            if exact {
                return None;
            }
            continue;
        }
        let mut splits = Vec::new();
        let totals = if exact { c..=c } else { 0..=c };
        for total in totals {
            compositions(total, cols.len(), &mut Vec::new(), &mut splits);
        }
        let mut next: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
        for (sums, mat) in &states {
            for split in &splits {
                let mut sums = sums.clone();
                let mut mat = mat.clone();
                for (&k, &v) in cols.iter().zip(split) {
                    sums[k] += v;
                    mat[(i - 1) * n + slots[k] - 1] = v;
                }
                match next.get_mut(&sums) {
                    Some(existing) if *existing <= mat => {}
                    Some(existing) => *existing = mat,
                    None => {
                        next.insert(sums, mat);
                    }
                }
            }
        }
        states = next;
    }
    Some(states)
}

fn compositions(total: u64, parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if parts == 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for v in 0..=total {
        cur.push(v);
        compositions(total - v, parts - 1, cur, out);
        cur.pop();
    }
}
