//! Deterministic report assembly: every job emits a `schema: 1` JSON object
//! whose keys serialize sorted, and the table jobs can emit flat CSV rows
//! instead.  Identical configuration yields byte-identical output.

use serde_json::{json, Map, Value};
use weyl_core::model::{DegreeVerdict, EulerianReport};
use weyl_core::suite::{CheckStatus, SuiteReport};

pub fn base(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".to_string(), json!(1));
    m.insert("command".to_string(), json!(command));
    m
}

pub fn render(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("reports serialize");
    text.push('\n');
    text
}

pub fn window_json(lo: i64, hi: i64) -> Value {
    json!({"hi": hi, "lo": lo})
}

pub fn dims_json(rows: &[(i64, usize)]) -> Value {
    Value::Array(rows.iter().map(|(d, m)| json!([d, m])).collect())
}

pub fn table_json(rows: &[(usize, i64, usize)]) -> Value {
    Value::Array(rows.iter().map(|(nu, d, m)| json!([nu, d, m])).collect())
}

pub fn eulerian_json(report: &EulerianReport) -> Value {
    let per_degree: Vec<Value> = report
        .per_degree
        .iter()
        .map(|(d, verdict)| match verdict {
            DegreeVerdict::Nilpotent { order } => json!([d, order]),
            DegreeVerdict::NotNilpotent { conclusive: true } => json!([d, "not nilpotent"]),
            DegreeVerdict::NotNilpotent { conclusive: false } => {
                json!([d, "not nilpotent within bound"])
            }
        })
        .collect();
    json!({
        "perDegree": per_degree,
        "uniformBound": report.uniform_bound,
        "vacuous": report.vacuous,
        "window": window_json(report.lo, report.hi),
    })
}

pub fn suite_json(report: &SuiteReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "detail": c.detail,
                "name": c.name,
                "status": if c.status == CheckStatus::Pass { "pass" } else { "fail" },
            })
        })
        .collect();
    json!({"checks": checks, "passed": report.passed(), "suite": report.suite})
}

/// Concentration verdict for a dimension table: with no expected degree the
/// table is merely reported; otherwise the first nonzero entry off the
/// expected degree is a counterexample.
pub fn concentration_verdict(rows: &[(usize, i64, usize)], expect: Option<i64>) -> (Value, bool) {
    let Some(d0) = expect else {
        return (json!({"kind": "none"}), true);
    };
    let mut vacuous = true;
    for &(nu, d, dim) in rows {
        if dim == 0 {
            continue;
        }
        vacuous = false;
        if d != d0 {
            return (
                json!({"degree": d, "dim": dim, "kind": "counterexample", "nu": nu}),
                false,
            );
        }
    }
    (json!({"degree": d0, "kind": "concentrated", "vacuous": vacuous}), true)
}

pub fn csv_dims(rows: &[(i64, usize)]) -> String {
    let mut out = String::from("degree,dim\n");
    for (d, m) in rows {
        out.push_str(&format!("{},{}\n", d, m));
    }
    out
}

pub fn csv_table(rows: &[(usize, i64, usize)]) -> String {
    let mut out = String::from("nu,degree,dim\n");
    for (nu, d, m) in rows {
        out.push_str(&format!("{},{},{}\n", nu, d, m));
    }
    out
}

pub fn csv_checks(report: &SuiteReport) -> String {
    let mut out = String::from("check,status\n");
    for c in &report.checks {
        let status = if c.status == CheckStatus::Pass { "pass" } else { "fail" };
        out.push_str(&format!("{},{}\n", c.name, status));
    }
    out
}
