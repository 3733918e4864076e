use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::engine::FactStore;
use crate::kernel::{Number, Program, Substitute, Term};
use crate::syntax::{parse_term, print_term};

use super::goal::{solve_goal, GoalItem};
use super::{Documents, HybridError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggFn {
    Sum,
    Count,
    Min,
    Max,
    Avg,
}

impl AggFn {
    fn parse(name: &str) -> Option<AggFn> {
        Some(match name {
            "sum" => AggFn::Sum,
            "count" => AggFn::Count,
            "min" => AggFn::Min,
            "max" => AggFn::Max,
            "avg" => AggFn::Avg,
            _ => return None,
        })
    }
}

impl fmt::Display for AggFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggFn::Sum => "sum",
            AggFn::Count => "count",
            AggFn::Min => "min",
            AggFn::Max => "max",
            AggFn::Avg => "avg",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AggColumn {
    Group(String),
    Agg(AggFn, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggTemplate {
    pub columns: Vec<AggColumn>,
}

impl AggTemplate {
    pub fn variables(&self) -> Vec<&str> {
        self.columns
            .iter()
            .map(|c| match c {
                AggColumn::Group(v) | AggColumn::Agg(_, v) => v.as_str(),
            })
            .collect()
    }
}

/// Reads a template such as `[DNO, sum(HOURS)]`.
pub fn parse_template(text: &str) -> Result<AggTemplate, HybridError> {
    let t = parse_term(text)?;
    let bad = || HybridError::BadTemplate(print_term(&t));
    let items = t.as_proper_list().ok_or_else(bad)?;
    if items.is_empty() {
        return Err(bad());
    }
    let columns = items
        .into_iter()
        .map(|c| match c {
            Term::Var(v) => Some(AggColumn::Group(v.clone())),
            Term::Compound(f, args) if args.len() == 1 => match &args[0] {
                Term::Var(v) => Some(AggColumn::Agg(AggFn::parse(f)?, v.clone())),
                _ => None,
            },
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    Ok(AggTemplate { columns })
}

/// Compensated (Neumaier) summation.
fn neumaier(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn numbers(f: AggFn, values: &[Term]) -> Result<Vec<Number>, HybridError> {
    values
        .iter()
        .map(|v| {
            v.as_number().ok_or_else(|| HybridError::NonNumericAggregate { func: f.to_string(), value: print_term(v) })
        })
        .collect()
}

fn value_cmp(a: &Term, b: &Term) -> std::cmp::Ordering {
    match (a.as_number(), b.as_number()) {
        (Some(x), Some(y)) => x.arith_cmp(y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

fn aggregate(f: AggFn, values: &[Term]) -> Result<Term, HybridError> {
    Ok(match f {
        AggFn::Count => Term::int(values.len() as i64),
        AggFn::Min => values.iter().min_by(|a, b| value_cmp(a, b)).cloned().expect("groups are non-empty"),
        AggFn::Max => values.iter().max_by(|a, b| value_cmp(a, b)).cloned().expect("groups are non-empty"),
        AggFn::Sum => {
            let ns = numbers(f, values)?;
            let exact = ns.iter().try_fold(0i64, |acc, n| match n {
                Number::Int(i) => acc.checked_add(*i),
                Number::Float(_) => None,
            });
            match exact {
                Some(i) => Term::int(i),
                None => Term::float(neumaier(ns.iter().map(|n| n.as_f64()))),
            }
        }
        AggFn::Avg => {
            let ns = numbers(f, values)?;
            Term::float(neumaier(ns.iter().map(|n| n.as_f64())) / ns.len() as f64)
        }
    })
}

/// Groups the answers of `goal` by the template's plain variables and
/// aggregates the rest. Rows are `[group values..., aggregate values...]`
/// sorted by group key.
pub fn ddbase_aggregate(
    template: &AggTemplate,
    goal: &[GoalItem],
    p: &Program,
    store: &FactStore,
    docs: &Documents,
) -> Result<Vec<Vec<Term>>, HybridError> {
    let goal_vars: BTreeSet<String> = goal.iter().flat_map(GoalItem::variables).collect();
    if let Some(v) = template.variables().into_iter().find(|v| !goal_vars.contains(*v)) {
        return Err(HybridError::TemplateVarUnbound { var: v.to_string() });
    }
    let groups: Vec<&str> = template
        .columns
        .iter()
        .filter_map(|c| match c {
            AggColumn::Group(v) => Some(v.as_str()),
            _ => None,
        })
        .collect();
    let aggs: Vec<(AggFn, &str)> = template
        .columns
        .iter()
        .filter_map(|c| match c {
            AggColumn::Agg(f, v) => Some((*f, v.as_str())),
            _ => None,
        })
        .collect();
    let value = |s: &crate::kernel::Substitution, v: &str| -> Result<Term, HybridError> {
        let t = Term::var(v).apply(s);
        if t.is_ground() {
            Ok(t)
        } else {
            Err(HybridError::TemplateVarUnbound { var: v.to_string() })
        }
    };
    let mut table: BTreeMap<Vec<Term>, Vec<Vec<Term>>> = BTreeMap::new();
    for s in solve_goal(goal, p, store, docs)? {
        let key = groups.iter().map(|v| value(&s, v)).collect::<Result<Vec<_>, _>>()?;
        let cols = table.entry(key).or_insert_with(|| vec![Vec::new(); aggs.len()]);
        for (col, (_, v)) in cols.iter_mut().zip(&aggs) {
            col.push(value(&s, v)?);
        }
    }
    table
        .into_iter()
        .map(|(mut key, cols)| {
            for (vals, (f, _)) in cols.iter().zip(&aggs) {
                key.push(aggregate(*f, vals)?);
            }
            Ok(key)
        })
        .collect()
}

/// Nested-list text: `[[1, 12.5], [4, 30.0]]`.
pub fn format_tuples(rows: &[Vec<Term>]) -> String {
    let inner: Vec<String> =
        rows.iter().map(|r| format!("[{}]", r.iter().map(print_term).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", inner.join(", "))
}

pub fn tuples_to_json(rows: &[Vec<Term>]) -> serde_json::Value {
    let cell = |t: &Term| match t {
        Term::Num(Number::Int(i)) => serde_json::json!(i),
        Term::Num(Number::Float(f)) => serde_json::json!(f),
        Term::Const(c) => serde_json::json!(c),
        other => serde_json::json!(print_term(other)),
    };
    serde_json::Value::Array(rows.iter().map(|r| serde_json::Value::Array(r.iter().map(cell).collect())).collect())
}
