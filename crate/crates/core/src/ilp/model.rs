use super::Family;
use crate::error::{Error, Result};
use crate::workload::{Config, Workload};

/// Documented default for the linking constant.
pub const DEFAULT_BIG_M: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }

    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Ge => lhs >= rhs,
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// `sum(coef * var) <sense> rhs`, terms refer to variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    pub fn lhs(&self, values: &[i64]) -> i64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn holds(&self, values: &[i64]) -> bool {
        self.sense.holds(self.lhs(values), self.rhs)
    }
}

/// Variables are laid out as `x_1_1 .. x_n_n`, `y_1_1 .. y_n_n`,
/// `r_1 .. r_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub n: usize,
    pub delta: usize,
    pub theta: usize,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, i64)>,
    pub big_m: u64,
}

impl IlpModel {
    pub fn x_var(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    pub fn y_var(&self, i: usize, j: usize) -> usize {
        self.n * self.n + (i - 1) * self.n + (j - 1)
    }

    pub fn r_var(&self, j: usize) -> usize {
        2 * self.n * self.n + (j - 1)
    }

    pub fn constraints_of(&self, family: Family) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(move |c| c.family == family)
    }

    pub fn objective_at(&self, values: &[i64]) -> i64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Rows not satisfied by `values` (indexed like `variables`).
    pub fn violated<'a>(&'a self, values: &'a [i64]) -> impl Iterator<Item = &'a Constraint> + 'a {
        self.constraints.iter().filter(move |c| !c.holds(values))
    }
}

/// Linking constant for a workload: `requested` verbatim if given, else the
/// default tightened to `max(total arrivals, 1)` when that is smaller.
pub fn effective_big_m(requested: Option<u64>, workload: &Workload) -> u64 {
    requested.unwrap_or_else(|| DEFAULT_BIG_M.min(workload.total_arrivals().max(1)))
}

/// Transcribes objective and every constraint family with its index range.
pub fn build_model(workload: &Workload, config: &Config, big_m: u64) -> Result<IlpModel> {
    let required = workload.total_arrivals();
    if big_m == 0 || big_m < required {
        return Err(Error::BigMTooSmall {
            big_m,
            required: required.max(1),
        });
    }
    if workload.len() != config.n() {
        return Err(Error::LengthMismatch {
            field: "arrivals",
            expected: config.n(),
            found: workload.len(),
        });
    }
    let n = config.n();
    let delta = config.delta();
    let theta = config.theta();

    let mut variables = Vec::with_capacity(2 * n * n + n);
    for prefix in ["x", "y"] {
        for i in 1..=n {
            for j in 1..=n {
                variables.push(Variable {
                    name: format!("{prefix}_{i}_{j}"),
                    kind: VarKind::Integer,
                });
            }
        }
    }
    for j in 1..=n {
        variables.push(Variable {
            name: format!("r_{j}"),
            kind: VarKind::Binary,
        });
    }

    let mut model = IlpModel {
        n,
        delta,
        theta,
        variables,
        constraints: Vec::new(),
        objective: Vec::new(),
        big_m,
    };

    let last = n - delta;
    let a = workload.arrivals();
    let d = workload.departures();
    let load = workload.mandatory_load(config);
    let mut rows = Vec::new();
    let mut push = |family: Family, suffix: String, terms: Vec<(usize, i64)>, sense, rhs| {
        rows.push(Constraint {
            name: format!("{}_{suffix}", family.tag()),
            family,
            terms,
            sense,
            rhs,
        });
    };

    for i in 1..=n - theta {
        let terms = (1..=i + theta - delta).map(|j| (model.x_var(i, j), 1)).collect();
        push(Family::Eq2, format!("i{i}"), terms, Sense::Ge, a[i - 1] as i64);
    }
    for i in n - theta + 1..=n {
        let terms = (1..=last).map(|j| (model.x_var(i, j), 1)).collect();
        push(Family::Eq3, format!("i{i}"), terms, Sense::Ge, a[i - 1] as i64);
    }
    for i in 1..=delta {
        let terms = (1..=last).map(|j| (model.y_var(i, j), 1)).collect();
        push(Family::Eq4, format!("i{i}"), terms, Sense::Le, d[i - 1] as i64);
    }
    for i in delta + 1..=n {
        let terms = (i - delta..=last).map(|j| (model.y_var(i, j), 1)).collect();
        push(Family::Eq5, format!("i{i}"), terms, Sense::Le, d[i - 1] as i64);
    }
    for i in delta + 2..=n {
        let terms = (1..=i - delta - 1).map(|j| (model.y_var(i, j), 1)).collect();
        push(Family::Eq6, format!("i{i}"), terms, Sense::Eq, 0);
    }
    for j in 1..=n {
        push(Family::Eq7, format!("j{j}"), net_terms(&model, j), Sense::Ge, 0);
    }
    for j in delta + 1..=n {
        let rhs = load.at(j) as i64;
        push(Family::Eq8, format!("j{j}"), net_terms(&model, j - delta), Sense::Ge, rhs);
    }
    for i in 1..=last {
        let terms = (i..i + delta).map(|j| (model.r_var(j), 1)).collect();
        push(Family::Eq9, format!("i{i}"), terms, Sense::Le, 1);
    }
    for (family, y) in [(Family::Eq10, false), (Family::Eq11, true)] {
        for i in 1..=n {
            for j in 1..=n {
                let v = if y { model.y_var(i, j) } else { model.x_var(i, j) };
                let terms = vec![(model.r_var(j), big_m as i64), (v, -1)];
                push(family, format!("i{i}_j{j}"), terms, Sense::Ge, 0);
            }
        }
    }
    for j in last + 1..=n {
        push(Family::Eq12, format!("j{j}"), vec![(model.r_var(j), 1)], Sense::Eq, 0);
    }
    model.constraints = rows;

    let mut objective = Vec::new();
    for (sign, is_y) in [(1i64, false), (-1, true)] {
        for i in 1..=n {
            for j in 1..=last {
                let w = config.cost_weight(j);
                if w != 0 {
                    let v = if is_y { model.y_var(i, j) } else { model.x_var(i, j) };
                    objective.push((v, sign * w));
                }
            }
        }
    }
    model.objective = objective;
    Ok(model)
}

/// `sum_i sum_{t <= upto} (x_it - y_it)`; x terms first.
fn net_terms(model: &IlpModel, upto: usize) -> Vec<(usize, i64)> {
    let mut terms = Vec::new();
    for i in 1..=model.n {
        for t in 1..=upto {
            terms.push((model.x_var(i, t), 1));
        }
    }
    for i in 1..=model.n {
        for t in 1..=upto {
            terms.push((model.y_var(i, t), -1));
        }
    }
    terms
}
