use std::collections::BTreeSet;

use crate::engine::{call_builtin, literal_kind, literal_plan_item, plan_order, FactStore, LitKind, PlanItem};
use crate::kernel::{Literal, PredKey, Program, Substitute, Substitution, Term};
use crate::syntax::{body_goals, literal_from_term, parse_term, SyntaxError};

use super::path::{path_eval, PathExpr};
use super::{Documents, HybridError};

#[derive(Debug, Clone, PartialEq)]
pub enum GoalItem {
    Literal(Literal),
    /// `Var := PathExpr`
    PathBinding { var: Term, expr: PathExpr },
}

impl GoalItem {
    fn plan_item(&self, idb: &BTreeSet<PredKey>) -> PlanItem {
        match self {
            GoalItem::Literal(l) => literal_plan_item(l, literal_kind(l, idb)),
            GoalItem::PathBinding { var, expr } => PlanItem {
                need: crate::engine::Need::All(expr.inputs()),
                binds: var.variable_set(),
            },
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        match self {
            GoalItem::Literal(l) => l.atom.variables().into_iter().collect(),
            GoalItem::PathBinding { var, expr } => {
                let mut v = var.variable_set();
                v.extend(expr.inputs());
                v
            }
        }
    }
}

/// Parses a query conjunction; `true` is the empty goal.
pub fn parse_goal(text: &str) -> Result<Vec<GoalItem>, HybridError> {
    let term = parse_term(text)?;
    let mut out = Vec::new();
    for g in body_goals(&term) {
        match &g {
            Term::Const(c) if c == "true" => {}
            Term::Compound(f, args) if f == ":=" && args.len() == 2 => {
                out.push(GoalItem::PathBinding { var: args[0].clone(), expr: PathExpr::from_term(&args[1])? });
            }
            _ => {
                let lit = literal_from_term(&g).map_err(|m| SyntaxError::new("", 1, 1, m))?;
                out.push(GoalItem::Literal(lit));
            }
        }
    }
    Ok(out)
}

/// All answers to the conjunction over an evaluated store. Goals run left to
/// right, each postponed until its inputs are bound; facts are tried in
/// standard order and XML results in document order.
pub fn solve_goal(
    goal: &[GoalItem],
    p: &Program,
    store: &FactStore,
    docs: &Documents,
) -> Result<Vec<Substitution>, HybridError> {
    let idb = p.idb();
    let items: Vec<PlanItem> = goal.iter().map(|g| g.plan_item(&idb)).collect();
    let (order, _) = plan_order(&items, &BTreeSet::new());
    let kinds: Vec<Option<LitKind>> = goal
        .iter()
        .map(|g| match g {
            GoalItem::Literal(l) => Some(literal_kind(l, &idb)),
            GoalItem::PathBinding { .. } => None,
        })
        .collect();
    let sorted: FactStore = store.sorted().into_iter().cloned().collect();
    let mut out = Vec::new();
    let ctx = Ctx { goal, order: &order, kinds: &kinds, store: &sorted, docs };
    ctx.solve(0, Substitution::new(), &mut out)?;
    Ok(out)
}

struct Ctx<'a> {
    goal: &'a [GoalItem],
    order: &'a [usize],
    kinds: &'a [Option<LitKind>],
    store: &'a FactStore,
    docs: &'a Documents,
}

impl Ctx<'_> {
    fn solve(&self, pos: usize, s: Substitution, out: &mut Vec<Substitution>) -> Result<(), HybridError> {
        let Some(&i) = self.order.get(pos) else {
            out.push(s);
            return Ok(());
        };
        match (&self.goal[i], self.kinds[i]) {
            (GoalItem::Literal(l), Some(LitKind::Positive)) => {
                let pattern = l.atom.apply(&s);
                let next: Vec<Substitution> = self.store.matches(&pattern, &s, 0..self.store.len()).collect();
                for s2 in next {
                    self.solve(pos + 1, s2, out)?;
                }
            }
            (GoalItem::Literal(l), Some(LitKind::Negated)) => {
                if !self.store.any_match(&l.atom.apply(&s)) {
                    self.solve(pos + 1, s, out)?;
                }
            }
            (GoalItem::Literal(l), _) => {
                for s2 in call_builtin(&l.atom, &s)? {
                    self.solve(pos + 1, s2, out)?;
                }
            }
            (GoalItem::PathBinding { var, expr }, _) => {
                let root = expr.resolve_root(self.docs, &s)?;
                for (value, env) in path_eval(&root, &expr.steps, &s)? {
                    let mut s2 = env;
                    if s2.unify(&var.apply(&s), &value.to_term()) {
                        self.solve(pos + 1, s2, out)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{atom_from_term, parse_program};

    fn setup() -> (Program, FactStore, Documents) {
        let p = parse_program("").unwrap();
        let store: FactStore = ["emp(a, 11, 1)", "emp(b, 22, 5)", "emp(c, 99, 4)"]
            .iter()
            .map(|t| atom_from_term(&parse_term(t).unwrap()).unwrap())
            .collect();
        let mut docs = Documents::new();
        docs.insert(
            "w.xml",
            crate::xml::parse(
                r#"<table><row ESSN="11" HOURS="NULL"/><row ESSN="11" HOURS="12.5"/><row ESSN="22" HOURS="10.0"/></table>"#,
            )
            .unwrap(),
        );
        (p, store, docs)
    }

    #[test]
    fn empty_goal_has_one_answer() {
        let (p, st, docs) = setup();
        assert_eq!(solve_goal(&parse_goal("true").unwrap(), &p, &st, &docs).unwrap().len(), 1);
    }

    #[test]
    fn join_with_document() {
        let (p, st, docs) = setup();
        let g = "emp(_, S, D), R := doc('w.xml')/row::[@'ESSN'=S], H := R@'HOURS', atom_number(H, N)";
        let answers = solve_goal(&parse_goal(g).unwrap(), &p, &st, &docs).unwrap();
        let ns: Vec<String> = answers.iter().map(|s| s.get("N").unwrap().to_string()).collect();
        assert_eq!(ns, vec!["12.5", "10.0"]);
        let swapped = "atom_number(H, N), H := R@'HOURS', R := doc('w.xml')/row::[@'ESSN'=S], emp(_, S, D)";
        assert_eq!(solve_goal(&parse_goal(swapped).unwrap(), &p, &st, &docs).unwrap().len(), 2);
    }

    #[test]
    fn negation_and_builtins_in_goals() {
        let (p, st, docs) = setup();
        let answers = solve_goal(&parse_goal("emp(X, S, _), S > 20, not emp(X, 22, _)").unwrap(), &p, &st, &docs).unwrap();
        assert_eq!(answers.len(), 1);
        assert_eq!(answers[0].get("X").unwrap().to_string(), "c");
    }
}
