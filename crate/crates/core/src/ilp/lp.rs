use std::fmt::Write;

use super::model::{IlpModel, VarKind};

const WRAP_AT: usize = 240;

/// Writes the model in LP interchange format.
///
/// Sections appear as `Minimize`, `Subject To`, `Bounds`, `General`,
/// `Binary`, `End`. Every term carries an explicit coefficient (`1 x_1_1`),
/// rows keep the model order and long expressions wrap onto indented
/// continuation lines. Output is a pure function of the model.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ conference scaling model: n={} delta={} theta={} big_M={}",
        model.n, model.delta, model.theta, model.big_m
    );
    out.push_str("Minimize\n");
    if model.objective.is_empty() {
        // Keep the section well formed when every weight is zero.
        let _ = writeln!(out, " obj: 0 {}", model.variables[0].name);
    } else {
        write_expr(&mut out, " obj:", &model.objective, model, "");
    }

    out.push_str("Subject To\n");
    for row in &model.constraints {
        let head = format!(" {}:", row.name);
        let tail = format!(" {} {}", row.sense.symbol(), row.rhs);
        write_expr(&mut out, &head, &row.terms, model, &tail);
    }

    out.push_str("Bounds\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Integer) {
        let _ = writeln!(out, " {} >= 0", v.name);
    }
    out.push_str("General\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Integer) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("Binary\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

fn write_expr(out: &mut String, head: &str, terms: &[(usize, i64)], model: &IlpModel, tail: &str) {
    let mut line = String::from(head);
    for (k, &(var, coef)) in terms.iter().enumerate() {
        let name = &model.variables[var].name;
        let term = match (k, coef < 0) {
            (0, false) => format!(" {coef} {name}"),
            (0, true) => format!(" - {} {name}", -coef),
            (_, false) => format!(" + {coef} {name}"),
            (_, true) => format!(" - {} {name}", -coef),
        };
        if line.len() + term.len() > WRAP_AT {
            out.push_str(&line);
            out.push('\n');
            line = String::from("  ");
        }
        line.push_str(&term);
    }
    line.push_str(tail);
    out.push_str(&line);
    out.push('\n');
}
