//! Text formats for workloads and schedules.
//!
//! Both are JSON objects. A workload file carries `n`, `delta`, `theta`,
//! `arrivals` and `departures`; a schedule file carries `n`, `delta` and
//! `changes`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::Schedule;
use crate::workload::{Config, Workload};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkloadFile {
    n: usize,
    delta: usize,
    theta: usize,
    arrivals: Vec<i64>,
    departures: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    n: usize,
    delta: usize,
    changes: Vec<i64>,
}

fn counts(field: &'static str, values: Vec<i64>) -> Result<Vec<u64>> {
    values
        .into_iter()
        .enumerate()
        .map(|(k, v)| u64::try_from(v).map_err(|_| Error::NegativeCount { field, slot: k + 1 }))
        .collect()
}

pub fn parse_workload(text: &str) -> Result<(Config, Workload)> {
    let raw: WorkloadFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    let config = Config::new(raw.n, raw.delta, raw.theta)?;
    let arrivals = counts("arrivals", raw.arrivals)?;
    let departures = counts("departures", raw.departures)?;
    let workload = Workload::new(arrivals, departures, &config)?;
    Ok((config, workload))
}

fn json_list<T: Serialize>(values: &[T]) -> String {
    serde_json::to_string(values).expect("integer lists serialize")
}

pub fn write_workload(config: &Config, workload: &Workload) -> String {
    format!(
        "{{\n  \"n\": {},\n  \"delta\": {},\n  \"theta\": {},\n  \"arrivals\": {},\n  \"departures\": {}\n}}\n",
        config.n(),
        config.delta(),
        config.theta(),
        json_list(workload.arrivals()),
        json_list(workload.departures()),
    )
}

/// Returns the declared `(n, delta)` with the schedule; they are checked
/// against a configuration by [`parse_schedule_for`].
pub fn parse_schedule(text: &str) -> Result<(usize, usize, Schedule)> {
    let raw: ScheduleFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    if raw.changes.len() != raw.n {
        return Err(Error::LengthMismatch {
            field: "changes",
            expected: raw.n,
            found: raw.changes.len(),
        });
    }
    Ok((raw.n, raw.delta, Schedule::from_changes(raw.changes)))
}

pub fn parse_schedule_for(text: &str, config: &Config) -> Result<Schedule> {
    let (n, delta, schedule) = parse_schedule(text)?;
    if n != config.n() || delta != config.delta() {
        return Err(Error::InvalidConfig(format!(
            "schedule was made for n={n}, delta={delta} but the workload has n={}, delta={}",
            config.n(),
            config.delta()
        )));
    }
    Ok(schedule)
}

pub fn write_schedule(config: &Config, schedule: &Schedule) -> String {
    format!(
        "{{\n  \"n\": {},\n  \"delta\": {},\n  \"changes\": {}\n}}\n",
        config.n(),
        config.delta(),
        json_list(schedule.changes()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = r#"{"n": 8, "delta": 2, "theta": 3,
        "arrivals": [2,0,1,0,0,0,0,0], "departures": [0,0,0,0,2,0,0,0]}"#;

    #[test]
    fn round_trip_t1() {
        let (c, w) = parse_workload(T1).unwrap();
        assert_eq!((c.n(), c.delta(), c.theta()), (8, 2, 3));
        let (c2, w2) = parse_workload(&write_workload(&c, &w)).unwrap();
        assert_eq!((c, w), (c2, w2));
    }

    #[test]
    fn negative_prefix_names_first_slot() {
        let text = r#"{"n": 4, "delta": 2, "theta": 3, "arrivals": [1,0,0,0], "departures": [0,0,2,0]}"#;
        assert_eq!(parse_workload(text).unwrap_err(), Error::NegativeOccupancy { slot: 3 });
    }

    #[test]
    fn negative_count_names_slot() {
        let text = r#"{"n": 4, "delta": 2, "theta": 3, "arrivals": [1,-1,0,0], "departures": [0,0,0,0]}"#;
        assert_eq!(
            parse_workload(text).unwrap_err(),
            Error::NegativeCount { field: "arrivals", slot: 2 }
        );
    }

    #[test]
    fn length_mismatch() {
        let text = r#"{"n": 4, "delta": 2, "theta": 3, "arrivals": [1,0,0], "departures": [0,0,0,0]}"#;
        assert!(matches!(
            parse_workload(text).unwrap_err(),
            Error::LengthMismatch { field: "arrivals", expected: 4, found: 3 }
        ));
    }

    #[test]
    fn malformed_and_bad_config() {
        assert!(matches!(parse_workload("{").unwrap_err(), Error::Syntax(_)));
        let text = r#"{"n": 4, "delta": 3, "theta": 3, "arrivals": [0,0,0,0], "departures": [0,0,0,0]}"#;
        assert!(matches!(parse_workload(text).unwrap_err(), Error::InvalidConfig(_)));
    }

    #[test]
    fn schedule_round_trip() {
        let (c, _) = parse_workload(T1).unwrap();
        let s = Schedule::from_changes(vec![0, 3, 0, 0, -2, 0, 0, 0]);
        assert_eq!(parse_schedule_for(&write_schedule(&c, &s), &c).unwrap(), s);
        let other = Config::new(8, 3, 4).unwrap();
        assert!(parse_schedule_for(&write_schedule(&c, &s), &other).is_err());
    }
}
