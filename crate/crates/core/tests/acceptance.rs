//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use confscale::compare::{preset, run_compare, CompareSpec};
use confscale::ilp::{
    build_model, effective_big_m, export_lp, matrices_to_schedule, objective_value, parse_solution,
    validate_solution, Family,
};
use confscale::schedule::{check_feasibility, evaluate, resource_cost};
use confscale::solvers::{ads_heuristic, exact_oracle, exact_oracle_without, greedy, solve, Algorithm, OracleLimits};
use confscale::workload::generate_workload;
use confscale::{Config, ScenarioParams, SlotRng, SolutionMatrices, Workload};

const T1_LIMIT: Duration = Duration::from_secs(1);
const FEASIBILITY_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const HEURISTIC_LIMIT: Duration = Duration::from_millis(10);
const COMPARE_LIMIT: Duration = Duration::from_secs(5);
const COST_FORM_SAMPLES: usize = 1000;
const SUITE_SEEDS: u64 = 100;
const TINY_INSTANCES: usize = 50;
const TINY_MAX_PARTICIPANTS: u64 = 6;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    if v.is_empty() {
        f64::NAN
    } else if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn t1() -> (Config, Workload) {
    let c = Config::new(8, 2, 3).unwrap();
    let w = Workload::new(vec![2, 0, 1, 0, 0, 0, 0, 0], vec![0, 0, 0, 0, 2, 0, 0, 0], &c).unwrap();
    (c, w)
}

fn tiny_config() -> Config {
    Config::new(8, 2, 3).unwrap()
}

/// First instances by seed (amplitude 2) with at most six participants.
fn tiny_suite() -> Vec<Workload> {
    let c = tiny_config();
    (0u64..)
        .map(|seed| generate_workload(&ScenarioParams::new("tiny", 2, seed), &c).unwrap())
        .filter(|w| w.total_arrivals() <= TINY_MAX_PARTICIPANTS)
        .take(TINY_INSTANCES)
        .collect()
}

fn hand_trace() -> Outcome {
    let started = Instant::now();
    let (c, w) = t1();
    let ads = ads_heuristic(&w, &c);
    let (ads_cost, ads_feas) = evaluate(&w, &ads, &c).map_err(|e| e.to_string())?;
    let gr = greedy(&w, &c);
    let (gr_cost, gr_feas) = evaluate(&w, &gr, &c).map_err(|e| e.to_string())?;
    let (m, cost) = exact_oracle(&w, &c, &OracleLimits::default()).map_err(|e| e.to_string())?;
    let valid = validate_solution(&m, &w, &c).is_empty();
    let elapsed = started.elapsed();
    let ok = ads.changes() == [0, 3, 0, 0, -2, 0, 0, 0]
        && (ads_cost.resource_cost, ads_cost.qos_cost) == (10, 7)
        && gr.changes() == [3, 0, -2, 0, 0, 0, 0, 0]
        && (gr_cost.resource_cost, gr_cost.qos_cost) == (9, 4)
        && cost == 6
        && valid
        && ads_feas.is_feasible()
        && gr_feas.is_feasible()
        && elapsed < T1_LIMIT;
    check(
        ok,
        format!(
            "ads {:?} cost {}/{}; greedy {:?} cost {}/{}; oracle cost {cost} valid={valid}; {elapsed:?}",
            ads.changes(),
            ads_cost.resource_cost,
            ads_cost.qos_cost,
            gr.changes(),
            gr_cost.resource_cost,
            gr_cost.qos_cost
        ),
    )
}

fn random_matrices(rng: &mut SlotRng) -> (Config, SolutionMatrices) {
    let delta = 2 + rng.uniform_inclusive(3) as usize;
    let theta = delta + 1 + rng.uniform_inclusive(2) as usize;
    let n = theta + rng.uniform_inclusive((12 - theta) as u64) as usize;
    let c = Config::new(n, delta, theta).unwrap();
    let mut m = SolutionMatrices::zeros(n);
    for i in 1..=n {
        for j in 1..=n {
            m.set_x(i, j, rng.uniform_inclusive(1000));
            m.set_y(i, j, rng.uniform_inclusive(1000));
        }
        m.set_r(i, rng.uniform_inclusive(1) == 1);
    }
    (c, m)
}

fn cost_forms() -> Outcome {
    let mut rng = SlotRng::new(20_240_601);
    let mut mismatches = 0;
    for _ in 0..COST_FORM_SAMPLES {
        let (c, m) = random_matrices(&mut rng);
        if objective_value(&m, &c) != resource_cost(&matrices_to_schedule(&m, &c), &c) {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        format!("{mismatches} mismatches over {COST_FORM_SAMPLES} random matrices (n <= 12)"),
    )
}

fn feasibility_suite() -> Outcome {
    let started = Instant::now();
    let mut families = vec![
        ("small-30", Config::new(30, 3, 4).unwrap(), 30),
        ("small-6", Config::new(30, 3, 4).unwrap(), 6),
    ];
    for name in ["mmog", "oppd"] {
        let p = preset(name).unwrap();
        families.push((p.name, p.config(), p.amplitude));
    }
    let mut runs = 0;
    let mut failures = Vec::new();
    for (name, c, amp) in families {
        for seed in 0..SUITE_SEEDS {
            let w = generate_workload(&ScenarioParams::new(name, amp, seed), &c).map_err(|e| e.to_string())?;
            for (alg, s) in [("ads", ads_heuristic(&w, &c)), ("greedy", greedy(&w, &c))] {
                runs += 1;
                let report = check_feasibility(&w, &s, &c).map_err(|e| e.to_string())?;
                if !report.is_feasible() {
                    failures.push(format!("{name}/{alg}/seed {seed}"));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    check(
        failures.is_empty() && elapsed < FEASIBILITY_LIMIT,
        format!(
            "{} of {runs} schedules feasible in {elapsed:?}{}",
            runs - failures.len(),
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

struct TinyRun {
    ads: confscale::CostReport,
    greedy: confscale::CostReport,
    oracle_cost: i64,
    oracle_qos: u64,
    oracle_valid: bool,
    relaxed_keeps_eq8: bool,
}

fn run_tiny(suite: &[Workload]) -> Result<(Vec<TinyRun>, Duration), String> {
    let c = tiny_config();
    let limits = OracleLimits::default();
    let started = Instant::now();
    let mut runs = Vec::new();
    for w in suite {
        let err = |e: confscale::Error| e.to_string();
        let ads = solve(w, &c, Algorithm::Ads, &limits).map_err(err)?;
        let gr = solve(w, &c, Algorithm::Greedy, &limits).map_err(err)?;
        let (m, cost) = exact_oracle(w, &c, &limits).map_err(err)?;
        let (oracle_report, _) = evaluate(w, &matrices_to_schedule(&m, &c), &c).map_err(err)?;
        let (relaxed, _) = exact_oracle_without(w, &c, &limits, &[Family::Eq8]).map_err(err)?;
        runs.push(TinyRun {
            ads: ads.cost,
            greedy: gr.cost,
            oracle_cost: cost,
            oracle_qos: oracle_report.qos_cost,
            oracle_valid: validate_solution(&m, w, &c).is_empty(),
            relaxed_keeps_eq8: validate_solution(&relaxed, w, &c).iter().all(|v| v.family != Family::Eq8),
        });
    }
    Ok((runs, started.elapsed()))
}

fn oracle_dominance(runs: &[TinyRun], elapsed: Duration) -> Outcome {
    let dominated = runs
        .iter()
        .filter(|r| r.oracle_cost <= r.ads.resource_cost.min(r.greedy.resource_cost))
        .count();
    let valid = runs.iter().filter(|r| r.oracle_valid).count();
    check(
        runs.len() == TINY_INSTANCES && dominated == runs.len() && valid == runs.len() && elapsed < ORACLE_LIMIT,
        format!(
            "oracle <= min(ads, greedy) on {dominated}/{}, valid on {valid}/{}; {elapsed:?}",
            runs.len(),
            runs.len()
        ),
    )
}

fn implied_load(runs: &[TinyRun]) -> Outcome {
    let kept = runs.iter().filter(|r| r.relaxed_keeps_eq8).count();
    check(
        kept == runs.len(),
        format!("EQ8 holds without being imposed on {kept}/{} instances", runs.len()),
    )
}

fn orderings(runs: &[TinyRun]) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for name in ["mmog", "oppd"] {
        let p = preset(name).unwrap();
        let spec = CompareSpec::new(p.params(0), p.config(), 0..=SUITE_SEEDS - 1, vec![Algorithm::Ads, Algorithm::Greedy]);
        let out = run_compare(&spec).map_err(|e| e.to_string())?;
        let res = (
            out.median_resource_cost(Algorithm::Ads).unwrap(),
            out.median_resource_cost(Algorithm::Greedy).unwrap(),
        );
        let qos = (
            out.median_qos_cost(Algorithm::Ads).unwrap(),
            out.median_qos_cost(Algorithm::Greedy).unwrap(),
        );
        ok &= res.0 <= res.1 && qos.1 <= qos.0;
        details.push(format!(
            "{name}: resource ads {} <= greedy {}, qos greedy {} <= ads {}",
            res.0, res.1, qos.1, qos.0
        ));
    }
    let ads_qos: Vec<f64> = runs.iter().map(|r| r.ads.qos_cost as f64).collect();
    let oracle_qos: Vec<f64> = runs.iter().map(|r| r.oracle_qos as f64).collect();
    let (a, o) = (median(&ads_qos), median(&oracle_qos));
    ok &= a <= o;
    details.push(format!("tiny: qos ads {a} <= oracle {o}"));
    check(ok, details.join("; "))
}

/// Median of `(ads - oracle) / oracle` over instances with a positive
/// oracle cost (the ratio is undefined otherwise), and how many were left
/// out.
fn relative_gap(amplitude: u64) -> Result<(f64, usize), String> {
    let c = tiny_config();
    let limits = OracleLimits::default();
    let mut gaps = Vec::new();
    let mut undefined = 0;
    for seed in 0..TINY_INSTANCES as u64 {
        let w = generate_workload(&ScenarioParams::new("gap", amplitude, seed), &c).map_err(|e| e.to_string())?;
        let (_, oracle) = exact_oracle(&w, &c, &limits).map_err(|e| e.to_string())?;
        let ads = resource_cost(&ads_heuristic(&w, &c), &c);
        if oracle > 0 {
            gaps.push((ads - oracle) as f64 / oracle as f64);
        } else {
            undefined += 1;
        }
    }
    Ok((median(&gaps), undefined))
}

fn fluctuation_gap() -> Outcome {
    let (low, low_skipped) = relative_gap(1)?;
    let (high, high_skipped) = relative_gap(2)?;
    check(
        low < high,
        format!(
            "median gap amplitude 1: {:.1}% ({low_skipped} with zero oracle cost left out), amplitude 2: {:.1}% ({high_skipped} left out)",
            100.0 * low,
            100.0 * high
        ),
    )
}

/// Names listed in the General and Binary sections of LP text.
fn declared_names(lp: &str) -> Vec<String> {
    let mut names = Vec::new();
    let mut listing = false;
    for line in lp.lines() {
        match line.trim() {
            "General" | "Binary" => listing = true,
            "End" | "Bounds" | "Subject To" | "Minimize" => listing = false,
            other if listing => names.extend(other.split_whitespace().map(str::to_string)),
            _ => {}
        }
    }
    names
}

const T1_OPTIMUM: &str = "\\ hand-written optimum\nx_1_2 2\nx_3_4 1\ny_5_4 2\nr_2 1\nr_4 1\n";

fn lp_round_trip() -> Outcome {
    let (c, w) = t1();
    let big_m = effective_big_m(None, &w);
    let model = build_model(&w, &c, big_m).map_err(|e| e.to_string())?;
    let lp = export_lp(&model);
    let again = export_lp(&build_model(&w, &c, big_m).map_err(|e| e.to_string())?);
    let declared = declared_names(&lp);
    let text: String = T1_OPTIMUM.lines().filter(|l| !l.starts_with('\\')).map(|l| format!("{l}\n")).collect();
    let all_declared = text
        .lines()
        .filter_map(|l| l.split_whitespace().next())
        .all(|name| declared.iter().any(|d| d == name));
    let m = parse_solution(&text, &model).map_err(|e| e.to_string())?;
    let cost = objective_value(&m, &c);
    let valid = validate_solution(&m, &w, &c).is_empty();
    check(
        cost == 6 && valid && lp == again && all_declared,
        format!(
            "cost {cost}, valid={valid}, byte-stable={}, names declared={all_declared}, {} bytes",
            lp == again,
            lp.len()
        ),
    )
}

fn slowest<T>(runs: usize, mut f: impl FnMut() -> T) -> Duration {
    (0..runs)
        .map(|_| {
            let started = Instant::now();
            std::hint::black_box(f());
            started.elapsed()
        })
        .max()
        .unwrap_or_default()
}

fn performance() -> Outcome {
    let p = preset("mmog").unwrap();
    let c = p.config();
    let w = generate_workload(&p.params(0), &c).map_err(|e| e.to_string())?;
    let ads = slowest(5, || ads_heuristic(&w, &c));
    let gr = slowest(5, || greedy(&w, &c));
    let spec = CompareSpec::new(p.params(0), c, 0..=SUITE_SEEDS - 1, vec![Algorithm::Ads, Algorithm::Greedy]);
    let started = Instant::now();
    let out = run_compare(&spec).map_err(|e| e.to_string())?;
    let compare = started.elapsed();
    check(
        ads < HEURISTIC_LIMIT && gr < HEURISTIC_LIMIT && compare < COMPARE_LIMIT && out.rows.len() == 200,
        format!("ads {ads:?}, greedy {gr:?} (slowest of 5), compare of {} rows {compare:?}", out.rows.len()),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 hand-trace fidelity", hand_trace()),
        ("2 cost-form equivalence", cost_forms()),
        ("3 feasibility suite", feasibility_suite()),
    ];
    let suite = tiny_suite();
    match run_tiny(&suite) {
        Ok((runs, elapsed)) => {
            results.push(("4 oracle dominance", oracle_dominance(&runs, elapsed)));
            results.push(("5 implied mandatory load", implied_load(&runs)));
            results.push(("6 qualitative orderings", orderings(&runs)));
        }
        Err(e) => {
            for name in ["4 oracle dominance", "5 implied mandatory load", "6 qualitative orderings"] {
                results.push((name, Err(e.clone())));
            }
        }
    }
    results.push(("7 fluctuation gap direction", fluctuation_gap()));
    results.push(("8 LP round trip", lp_round_trip()));
    results.push(("9 performance", performance()));

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
