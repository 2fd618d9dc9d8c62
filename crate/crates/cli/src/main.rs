//! `confscale`: generate workloads, plan scaling schedules, export the ILP,
//! validate external solutions and compare algorithms over many seeds.
//!
//! Exit status: 0 on success, 1 when an infeasible schedule or solution is
//! reported, 2 on usage, parse or configuration errors (including oracle
//! refusals).

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use confscale::compare::{preset, run_compare, CompareSpec, PRESETS};
use confscale::ilp::{build_model, effective_big_m, export_lp, objective_value, parse_solution, validate_solution};
use confscale::io::{parse_schedule_for, parse_workload, write_schedule, write_workload};
use confscale::schedule::evaluate;
use confscale::solvers::{solve, Algorithm, OracleLimits};
use confscale::workload::{generate_workload, parse_fraction};
use confscale::{Config, Error, ScenarioParams, Workload};

#[derive(Parser)]
#[command(name = "confscale", version, about = "Elastic scaling schedules for cloud conferencing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic workload file
    Generate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a schedule for a workload file
    Solve {
        workload: PathBuf,
        #[arg(long, default_value = "ads")]
        algorithm: Algorithm,
        #[command(flatten)]
        lag: LagArgs,
        /// Schedule file to write; without it the schedule goes to stdout and
        /// the report to stderr
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report costs and feasibility of a schedule file
    Evaluate {
        workload: PathBuf,
        schedule: PathBuf,
        #[command(flatten)]
        lag: LagArgs,
    },
    /// Check an external solver's solution (`<name> <value>` lines)
    Validate {
        workload: PathBuf,
        solution: PathBuf,
        /// Linking constant; defaults to 1000000 tightened to the total arrivals
        #[arg(long)]
        big_m: Option<u64>,
        #[command(flatten)]
        lag: LagArgs,
    },
    /// Write the integer program in LP format
    ExportLp {
        workload: PathBuf,
        /// Linking constant; defaults to 1000000 tightened to the total arrivals
        #[arg(long)]
        big_m: Option<u64>,
        #[command(flatten)]
        lag: LagArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run algorithms over a seed range and write a CSV report
    Compare {
        /// Evaluate this workload for every seed instead of generating one
        workload: Option<PathBuf>,
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Inclusive range `A..B`, or a single seed
        #[arg(long, default_value = "0..99", value_parser = parse_seeds)]
        seeds: RangeInclusive<u64>,
        /// Comma-separated list; defaults to all three
        #[arg(long, value_delimiter = ',')]
        algorithm: Vec<Algorithm>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Preset (`mmog`, `oppd`) or a custom name when every dimension is given
    #[arg(long, default_value = "mmog")]
    scenario: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    theta: Option<usize>,
    #[arg(long)]
    amplitude: Option<u64>,
    /// Decimal (`0.3`) or ratio (`3/10`)
    #[arg(long)]
    plateau_fraction: Option<String>,
}

/// Overrides for the lag and threshold stored in a workload file.
#[derive(Args)]
struct LagArgs {
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    theta: Option<usize>,
}

fn parse_seeds(text: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("expected `A..B` or a single seed, got `{text}`");
    match text.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(format!("seed range `{text}` is empty"));
            }
            Ok(a..=b)
        }
        None => text.trim().parse().map(|s| s..=s).map_err(|_| bad()),
    }
}

impl ScenarioArgs {
    fn resolve(&self, seed: u64) -> anyhow::Result<(ScenarioParams, Config)> {
        let base = preset(&self.scenario);
        let pick = |flag: Option<usize>, from: Option<usize>, name: &str| {
            flag.or(from).ok_or_else(|| {
                anyhow!(
                    "unknown scenario `{}` needs --{name} (presets: {})",
                    self.scenario,
                    PRESETS.map(|p| p.name).join(", ")
                )
            })
        };
        let n = pick(self.n, base.map(|p| p.n), "n")?;
        let delta = pick(self.delta, base.map(|p| p.delta), "delta")?;
        let theta = pick(self.theta, base.map(|p| p.theta), "theta")?;
        let amplitude = pick(
            self.amplitude.map(|a| a as usize),
            base.map(|p| p.amplitude as usize),
            "amplitude",
        )? as u64;
        let config = Config::new(n, delta, theta)?;
        let mut params = ScenarioParams::new(self.scenario.clone(), amplitude, seed);
        if let Some(text) = &self.plateau_fraction {
            params = params.with_plateau_fraction(parse_fraction(text)?);
        }
        params.validate()?;
        Ok((params, config))
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_workload(path: &Path, lag: &LagArgs) -> anyhow::Result<(Config, Workload)> {
    let (file_config, workload) =
        parse_workload(&read(path)?).with_context(|| format!("invalid workload file {}", path.display()))?;
    let config = Config::new(
        file_config.n(),
        lag.delta.unwrap_or(file_config.delta()),
        lag.theta.unwrap_or(file_config.theta()),
    )?;
    Ok((config, workload))
}

enum Status {
    Done,
    Infeasible,
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Generate { scenario, seed, out } => {
            let (params, config) = scenario.resolve(seed)?;
            let workload = generate_workload(&params, &config)?;
            emit(out.as_deref(), &write_workload(&config, &workload))?;
            Ok(Status::Done)
        }
        Command::Solve {
            workload,
            algorithm,
            lag,
            out,
        } => {
            let (config, workload) = load_workload(&workload, &lag)?;
            let solved = solve(&workload, &config, algorithm, &OracleLimits::default())?;
            let report = format!("algorithm={algorithm}\n{}\n", solved.cost);
            match out {
                Some(path) => {
                    emit(Some(&path), &write_schedule(&config, &solved.schedule))?;
                    print!("{report}");
                }
                None => {
                    emit(None, &write_schedule(&config, &solved.schedule))?;
                    eprint!("{report}");
                }
            }
            if solved.feasibility.is_feasible() {
                Ok(Status::Done)
            } else {
                eprint!("{}", solved.feasibility.render());
                Ok(Status::Infeasible)
            }
        }
        Command::Evaluate { workload, schedule, lag } => {
            let (config, workload) = load_workload(&workload, &lag)?;
            let schedule = parse_schedule_for(&read(&schedule)?, &config)
                .with_context(|| format!("invalid schedule file {}", schedule.display()))?;
            let (cost, feasibility) = evaluate(&workload, &schedule, &config)?;
            println!("{cost}");
            print!("{}", feasibility.render());
            Ok(if feasibility.is_feasible() { Status::Done } else { Status::Infeasible })
        }
        Command::Validate {
            workload,
            solution,
            big_m,
            lag,
        } => {
            let (config, workload) = load_workload(&workload, &lag)?;
            let model = build_model(&workload, &config, effective_big_m(big_m, &workload))?;
            let m = parse_solution(&read(&solution)?, &model)
                .with_context(|| format!("invalid solution file {}", solution.display()))?;
            let violations = validate_solution(&m, &workload, &config);
            println!("objective={}", objective_value(&m, &config));
            println!("feasible={}", violations.is_empty());
            for v in &violations {
                println!("{v}");
            }
            Ok(if violations.is_empty() { Status::Done } else { Status::Infeasible })
        }
        Command::ExportLp {
            workload,
            big_m,
            lag,
            out,
        } => {
            let (config, workload) = load_workload(&workload, &lag)?;
            let model = build_model(&workload, &config, effective_big_m(big_m, &workload))?;
            emit(out.as_deref(), &export_lp(&model))?;
            Ok(Status::Done)
        }
        Command::Compare {
            workload,
            scenario,
            seeds,
            algorithm,
            out,
        } => {
            let algorithms = if algorithm.is_empty() { Algorithm::ALL.to_vec() } else { algorithm };
            let spec = match &workload {
                Some(path) => {
                    let (config, w) = load_workload(
                        path,
                        &LagArgs {
                            delta: scenario.delta,
                            theta: scenario.theta,
                        },
                    )?;
                    let params = ScenarioParams::new(path.display().to_string(), 0, *seeds.start());
                    CompareSpec::new(params, config, seeds, algorithms).with_workload(w)
                }
                None => {
                    let (params, config) = scenario.resolve(*seeds.start())?;
                    CompareSpec::new(params, config, seeds, algorithms)
                }
            };
            let outcome = run_compare(&spec)?;
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            emit(out.as_deref(), &outcome.to_csv())?;
            let bad = outcome.infeasible();
            if bad > 0 {
                eprintln!("{bad} infeasible schedule(s) in the report");
                Ok(Status::Infeasible)
            } else {
                Ok(Status::Done)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Infeasible) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Infeasible(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
