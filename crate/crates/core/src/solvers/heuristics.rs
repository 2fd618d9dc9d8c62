use crate::schedule::Schedule;
use crate::workload::{Config, Workload};

/// Adaptive scaling heuristic.
///
/// From slot `i`, scans the activation slots `t` in `[i + delta, i + theta]`
/// (clamped to the horizon) for the smallest conference size
/// `sum_{p <= t} (a_p - d_p)`; on ties the later `t` wins. The request that
/// reaches this size is sent at `t - delta`, and the scan resumes at the
/// first slot where a new request may be sent. Stops once `i + delta` is past
/// the horizon. Requests with no net change are not recorded.
pub fn ads_heuristic(workload: &Workload, config: &Config) -> Schedule {
    let n = config.n();
    let delta = config.delta();
    let theta = config.theta();
    let a = workload.arrivals();
    let d = workload.departures();
    let mut schedule = Schedule::zeros(n);

    let mut old_size: i64 = 0;
    let mut i = 1;
    while i + delta <= n {
        let mut min_size = i64::MAX;
        let mut best_t = 0;
        for t in i + delta..=(i + theta).min(n) {
            // Recomputed from the first slot on every scan.
            let mut total_size: i64 = 0;
            for p in 1..=t {
                total_size += a[p - 1] as i64 - d[p - 1] as i64;
            }
            if min_size >= total_size {
                min_size = total_size;
                best_t = t - delta;
            }
        }
        let new_size = min_size;
        let change = new_size - old_size;
        if change != 0 {
            schedule.set(best_t, change);
        }
        old_size = new_size;
        i = best_t + delta - 1;
        i += 1;
    }
    schedule
}

/// Periodic baseline: at slots `1, 1 + delta, 1 + 2 delta, ... <= n - delta`
/// set the capacity to the peak occupancy over `[t + delta, t + 2 delta]`
/// (clamped to the horizon).
pub fn greedy(workload: &Workload, config: &Config) -> Schedule {
    let n = config.n();
    let delta = config.delta();
    let occupancy = workload.occupancy();
    let mut schedule = Schedule::zeros(n);
    let mut provisioned: i64 = 0;
    let mut t = 1;
    while t <= config.last_request_slot() {
        let target = occupancy[t + delta - 1..(t + 2 * delta).min(n)]
            .iter()
            .copied()
            .max()
            .unwrap_or(0) as i64;
        if target != provisioned {
            schedule.set(t, target - provisioned);
            provisioned = target;
        }
        t += delta;
    }
    schedule
}
