use confscale::ilp::{
    build_model, export_lp, lift_schedule, matrices_to_schedule, objective_value, parse_solution, validate_solution,
    DEFAULT_BIG_M,
};
use confscale::schedule::{capacity_trajectory, check_feasibility, resource_cost, simulate};
use confscale::solvers::{ads_heuristic, greedy};
use confscale::workload::generate_workload;
use confscale::{Config, ScenarioParams, Schedule, SolutionMatrices, Workload};
use num_rational::Ratio;
use proptest::prelude::*;

fn config() -> impl Strategy<Value = Config> {
    (2usize..=5)
        .prop_flat_map(|delta| (Just(delta), delta + 1..=delta + 3))
        .prop_flat_map(|(delta, theta)| (Just(delta), Just(theta), theta..=14))
        .prop_map(|(delta, theta, n)| Config::new(n, delta, theta).unwrap())
}

/// Arrivals are drawn freely; each departure takes a share of whoever is
/// present, so every prefix stays valid.
fn workload_for(config: Config, max: u64) -> impl Strategy<Value = (Config, Workload)> {
    let n = config.n();
    proptest::collection::vec((0..=max, 0u64..=100), n).prop_map(move |slots| {
        let mut present = 0;
        let (mut a, mut d) = (Vec::new(), Vec::new());
        for (arr, pct) in slots {
            present += arr;
            let dep = present * pct / 100;
            present -= dep;
            a.push(arr);
            d.push(dep);
        }
        let w = Workload::new(a, d, &config).unwrap();
        (config, w)
    })
}

fn instance(max: u64) -> impl Strategy<Value = (Config, Workload)> {
    config().prop_flat_map(move |c| workload_for(c, max))
}

/// Generated workloads whose decay phase lasts at least `delta` slots.
/// With a shorter one, participants joining and leaving in the last plateau
/// slots need earmarks no request can fund in time.
fn generated() -> impl Strategy<Value = (Config, Workload)> {
    (config(), 0u64..40, any::<u64>(), 0u64..=10)
        .prop_filter("decay shorter than delta", |(c, _, _, tenths)| {
            let p = ScenarioParams::new("g", 0, 0).with_plateau_fraction(Ratio::new(*tenths, 10));
            p.segments(c.n()).2 >= c.delta()
        })
        .prop_map(|(c, amp, seed, tenths)| {
            let p = ScenarioParams::new("g", amp, seed).with_plateau_fraction(Ratio::new(tenths, 10));
            (c, generate_workload(&p, &c).unwrap())
        })
}

/// Non-negative capacity schedule with requests `delta` apart.
fn schedule_for(config: Config) -> impl Strategy<Value = Schedule> {
    let n = config.n();
    proptest::collection::vec(-6i64..=8, n).prop_map(move |raw| {
        let mut changes = vec![0i64; n];
        let mut cap = 0i64;
        let mut j = 1;
        while j <= config.last_request_slot() {
            let s = raw[j - 1].max(-cap);
            if s != 0 {
                changes[j - 1] = s;
                cap += s;
                j += config.delta();
            } else {
                j += 1;
            }
        }
        Schedule::checked(changes, &config).unwrap()
    })
}

fn matrices(n: usize) -> impl Strategy<Value = SolutionMatrices> {
    (
        proptest::collection::vec(0u64..=50, n * n),
        proptest::collection::vec(0u64..=50, n * n),
        proptest::collection::vec(any::<bool>(), n),
    )
        .prop_map(move |(x, y, r)| {
            let mut m = SolutionMatrices::zeros(n);
            for i in 1..=n {
                for j in 1..=n {
                    m.set_x(i, j, x[(i - 1) * n + j - 1]);
                    m.set_y(i, j, y[(i - 1) * n + j - 1]);
                }
                m.set_r(i, r[i - 1]);
            }
            m
        })
}

fn matrix_instance() -> impl Strategy<Value = (Config, Workload, SolutionMatrices)> {
    instance(4).prop_flat_map(|(c, w)| (Just(c), Just(w), matrices(c.n())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generator_is_deterministic_and_valid(seed: u64, amp in 0u64..2000, n in 4usize..120) {
        let c = Config::new(n, 2, 3).unwrap();
        let p = ScenarioParams::new("p", amp, seed);
        let w = generate_workload(&p, &c).unwrap();
        prop_assert_eq!(&w, &generate_workload(&p, &c).unwrap());
        prop_assert_eq!(w.len(), n);
        prop_assert!(w.arrivals().iter().chain(w.departures()).all(|&v| v <= amp));
        prop_assert_eq!(w.occupancy().len(), n);
    }

    #[test]
    fn mandatory_load_bounded_by_occupancy((c, w) in instance(20)) {
        let load = w.mandatory_load(&c);
        let occ = w.occupancy();
        for i in 1..=c.n() {
            prop_assert!(load.at(i) <= occ[i - 1]);
            if i <= c.theta() {
                prop_assert_eq!(load.at(i), 0);
            }
        }
    }

    #[test]
    fn mandatory_load_grows_with_arrivals((c, w) in instance(20), slot in 0usize..14, extra in 1u64..10) {
        let slot = slot % c.n();
        let mut a = w.arrivals().to_vec();
        a[slot] += extra;
        let more = Workload::new(a, w.departures().to_vec(), &c).unwrap();
        let (before, after) = (w.mandatory_load(&c), more.mandatory_load(&c));
        for i in 1..=c.n() {
            prop_assert!(after.at(i) >= before.at(i));
        }
    }

    #[test]
    fn resource_cost_is_capacity_area((c, s) in config().prop_flat_map(|c| (Just(c), schedule_for(c)))) {
        let cap = capacity_trajectory(&s, &c).unwrap();
        let area: i64 = cap.iter().map(|&v| v as i64).sum();
        let requested: i64 = s.changes().iter().sum();
        prop_assert_eq!(resource_cost(&s, &c), area - requested);
    }

    #[test]
    fn more_capacity_never_hurts_waiting((c, w) in instance(6), extra in 1i64..5, at in 0usize..14) {
        let s = ads_heuristic(&w, &c);
        let j = 1 + at % c.last_request_slot();
        // Adding capacity at a slot already holding a request keeps the
        // separation intact.
        let j = s.requests().map(|(r, _)| r).find(|&r| r >= j).unwrap_or(j);
        let mut changes = s.changes().to_vec();
        changes[j - 1] += extra;
        let Ok(bigger) = Schedule::checked(changes, &c) else { return Ok(()) };
        let (base, more) = (simulate(&w, &s, &c).unwrap(), simulate(&w, &bigger, &c).unwrap());
        prop_assert!(more.qos_cost() <= base.qos_cost());
        let count = |r: &confscale::SimulationReport| r.unserved().iter().map(|&(_, k)| k).sum::<u64>();
        prop_assert!(count(&more) <= count(&base));
    }

    #[test]
    fn heuristics_feasible_and_liftable((c, w) in generated()) {
        for s in [ads_heuristic(&w, &c), greedy(&w, &c)] {
            let report = check_feasibility(&w, &s, &c).unwrap();
            prop_assert!(report.is_feasible(), "{}", report.render());
            let m = lift_schedule(&s, &w, &c).unwrap();
            prop_assert!(validate_solution(&m, &w, &c).is_empty());
            prop_assert_eq!(m.net_changes(), s.clone());
            prop_assert_eq!(objective_value(&m, &c), resource_cost(&s, &c));
        }
    }

    #[test]
    fn cost_forms_agree((c, _w, m) in matrix_instance()) {
        let s = matrices_to_schedule(&m, &c);
        prop_assert_eq!(objective_value(&m, &c), resource_cost(&s, &c));
    }

    #[test]
    fn model_rows_agree_with_validator((c, w, m) in matrix_instance()) {
        let model = build_model(&w, &c, DEFAULT_BIG_M).unwrap();
        let values = m.to_values();
        let mut from_model: Vec<String> = model
            .violated(&values)
            .map(|row| row.family.tag().to_string())
            .collect();
        let mut from_validator: Vec<String> = validate_solution(&m, &w, &c)
            .iter()
            .map(|v| v.family.tag().to_string())
            .collect();
        from_model.sort();
        from_validator.sort();
        prop_assert_eq!(from_model, from_validator);
        prop_assert_eq!(model.objective_at(&values), objective_value(&m, &c));
    }

    #[test]
    fn solution_text_round_trips((c, w, m) in matrix_instance()) {
        let model = build_model(&w, &c, DEFAULT_BIG_M).unwrap();
        let mut text = String::new();
        for (var, value) in model.variables.iter().zip(m.to_values()) {
            if value != 0 {
                text.push_str(&format!("{} {}.0\n", var.name, value));
            }
        }
        prop_assert_eq!(parse_solution(&text, &model).unwrap(), m);
        let lp = export_lp(&model);
        prop_assert_eq!(&lp, &export_lp(&build_model(&w, &c, DEFAULT_BIG_M).unwrap()));
        prop_assert!(model.variables.iter().all(|v| lp.contains(&v.name)));
    }
}
