//! Range restriction and the body-literal evaluation order.

use std::collections::BTreeSet;
use std::fmt;

use super::builtins::{self, is_builtin_atom};
use crate::kernel::{Literal, PredKey, Program, Rule, SourceSpan};

/// How a body literal is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LitKind {
    Positive,
    Negated,
    Builtin,
}

pub fn literal_kind(lit: &Literal, idb: &BTreeSet<PredKey>) -> LitKind {
    if lit.is_negated() {
        LitKind::Negated
    } else if is_builtin_atom(&lit.atom, idb) {
        LitKind::Builtin
    } else {
        LitKind::Positive
    }
}

/// When a goal may run and what it binds.
#[derive(Debug, Clone)]
pub(crate) enum Need {
    Always,
    All(BTreeSet<String>),
    Either(BTreeSet<String>, BTreeSet<String>),
}

#[derive(Debug, Clone)]
pub(crate) struct PlanItem {
    pub need: Need,
    pub binds: BTreeSet<String>,
}

impl PlanItem {
    fn ready(&self, bound: &BTreeSet<String>) -> bool {
        match &self.need {
            Need::Always => true,
            Need::All(v) => v.is_subset(bound),
            Need::Either(a, b) => a.is_subset(bound) || b.is_subset(bound),
        }
    }

    /// Variables that should have been bound but were not.
    pub fn missing(&self, bound: &BTreeSet<String>) -> BTreeSet<String> {
        match &self.need {
            Need::Always => BTreeSet::new(),
            Need::All(v) => v.difference(bound).cloned().collect(),
            Need::Either(a, b) => {
                let ma: BTreeSet<String> = a.difference(bound).cloned().collect();
                let mb: BTreeSet<String> = b.difference(bound).cloned().collect();
                if ma.len() <= mb.len() {
                    ma
                } else {
                    mb
                }
            }
        }
    }
}

pub(crate) fn literal_plan_item(lit: &Literal, kind: LitKind) -> PlanItem {
    let vars: BTreeSet<String> = lit.atom.variables().into_iter().collect();
    match kind {
        LitKind::Positive => PlanItem { need: Need::Always, binds: vars },
        LitKind::Negated => PlanItem {
            need: Need::All(vars.into_iter().filter(|v| !v.starts_with('_')).collect()),
            binds: BTreeSet::new(),
        },
        LitKind::Builtin => {
            let a = &lit.atom;
            let need = match (a.predicate.as_str(), a.args.len()) {
                ("=" | "same_as", 2) => Need::Either(a.args[0].variable_set(), a.args[1].variable_set()),
                _ => Need::All(builtins::input_vars(a)),
            };
            PlanItem { need, binds: builtins::output_vars(a) }
        }
    }
}

/// Orders goals left to right, postponing each goal until it is ready. When
/// nothing is ready the leftmost remaining goal is taken anyway. Returns the
/// order and, per position in it, the variables that were still unbound.
pub(crate) fn plan_order(items: &[PlanItem], bound: &BTreeSet<String>) -> (Vec<usize>, Vec<BTreeSet<String>>) {
    let mut bound = bound.clone();
    let mut left: Vec<usize> = (0..items.len()).collect();
    let mut order = Vec::with_capacity(items.len());
    let mut missing = Vec::with_capacity(items.len());
    while !left.is_empty() {
        let pick = left.iter().position(|&i| items[i].ready(&bound)).unwrap_or(0);
        let i = left.remove(pick);
        missing.push(items[i].missing(&bound));
        bound.extend(items[i].binds.iter().cloned());
        order.push(i);
    }
    (order, missing)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// A head variable not bound by the body.
    HeadVariable,
    /// A variable of a negated literal not bound by the positive body.
    NegatedOnly,
    /// A builtin input that nothing binds.
    UnboundBuiltinInput { goal: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyViolation {
    pub rule: String,
    pub span: Option<SourceSpan>,
    pub variable: String,
    pub kind: ViolationKind,
}

impl fmt::Display for SafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}", self.rule)?;
        if let Some(s) = &self.span {
            write!(f, " at {s}")?;
        }
        match &self.kind {
            ViolationKind::HeadVariable => {
                write!(f, ": head variable {} does not occur in a positive body literal", self.variable)
            }
            ViolationKind::NegatedOnly => {
                write!(f, ": variable {} occurs only under negation", self.variable)
            }
            ViolationKind::UnboundBuiltinInput { goal } => {
                write!(f, ": variable {} in {goal} is never bound", self.variable)
            }
        }
    }
}

fn rule_violations(rule: &Rule, idb: &BTreeSet<PredKey>, out: &mut Vec<SafetyViolation>) {
    let kinds: Vec<LitKind> = rule.body.iter().map(|l| literal_kind(l, idb)).collect();
    let items: Vec<PlanItem> = rule.body.iter().zip(&kinds).map(|(l, k)| literal_plan_item(l, *k)).collect();
    let (order, missing) = plan_order(&items, &BTreeSet::new());
    let bound: BTreeSet<String> = items.iter().flat_map(|i| i.binds.iter().cloned()).collect();
    let mut push = |variable: &str, kind: ViolationKind| {
        let v = SafetyViolation { rule: rule.name.clone(), span: rule.span.clone(), variable: variable.to_string(), kind };
        if !out.contains(&v) {
            out.push(v);
        }
    };
    for v in rule.head.variables() {
        if !bound.contains(&v) {
            push(&v, ViolationKind::HeadVariable);
        }
    }
    for (pos, &i) in order.iter().enumerate() {
        for v in &missing[pos] {
            match kinds[i] {
                LitKind::Negated => push(v, ViolationKind::NegatedOnly),
                LitKind::Builtin => push(
                    v,
                    ViolationKind::UnboundBuiltinInput { goal: crate::syntax::print_literal(&rule.body[i]) },
                ),
                LitKind::Positive => {}
            }
        }
    }
}

/// Returns every violation; an empty list means the program is safe.
pub fn check_safety(p: &Program) -> Vec<SafetyViolation> {
    let idb = p.idb();
    let mut out = Vec::new();
    for rule in &p.rules {
        rule_violations(rule, &idb, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn violations(s: &str) -> Vec<SafetyViolation> {
        check_safety(&parse_program(s).unwrap())
    }

    #[test]
    fn uncle_is_safe() {
        assert!(violations("uncle(X,Z) :- parent(X,Y), brother(Y,Z).").is_empty());
    }

    #[test]
    fn unbound_head_variable() {
        let v = violations("p(X) :- q(Y).");
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].variable, "X");
        assert_eq!(v[0].kind, ViolationKind::HeadVariable);
        assert!(v[0].to_string().contains("head variable X"));
    }

    #[test]
    fn route_rules_are_safe() {
        let route = "route(X, Y, L, T) :- street(X, Y, L, T1), prolog:pt(T, t(route(X, Y, L), e, T1)).\nroute(X, Y, L, T) :- street(X, Z, N, T1), route(Z, Y, M, T2), prolog:(L is N+M), prolog:pt(T, t(route(X, Y, L), r, T1, T2, (L is N+M))).\nstreet('KT', 'Wue', 15, T) :- prolog:pt(T, t(street('KT', 'Wue', 15), f1)).";
        assert!(violations(route).is_empty());
    }

    #[test]
    fn negation_needs_binding() {
        assert!(violations("a(X) :- b(X), not c(X).").is_empty());
        assert!(violations("a(X) :- b(X), not c(X, _).").is_empty());
        let v = violations("a(X) :- b(X), not c(Y).");
        assert_eq!(v[0].kind, ViolationKind::NegatedOnly);
        assert_eq!(v[0].variable, "Y");
    }

    #[test]
    fn non_ground_fact() {
        assert_eq!(violations("p(X).")[0].kind, ViolationKind::HeadVariable);
    }

    #[test]
    fn builtins_bind_and_delay() {
        assert!(violations("p(B) :- prolog:create_owl_thing(B, x, y, z).").is_empty());
        assert!(violations("p(L) :- L is N+1, q(N).").is_empty());
        let v = violations("p(L) :- L is N+1.");
        assert!(v.iter().any(|v| matches!(v.kind, ViolationKind::UnboundBuiltinInput { .. })));
    }

    #[test]
    fn plan_postpones_builtins() {
        let p = parse_program("p(L) :- L is N+1, q(N).").unwrap();
        let idb = p.idb();
        let items: Vec<PlanItem> =
            p.rules[0].body.iter().map(|l| literal_plan_item(l, literal_kind(l, &idb))).collect();
        assert_eq!(plan_order(&items, &BTreeSet::new()).0, vec![1, 0]);
    }
}
