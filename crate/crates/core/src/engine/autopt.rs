//! Instruments a plain program so that every derived atom carries its proof
//! tree in an extra last argument.

use std::collections::BTreeSet;

use super::builtins::is_builtin_atom;
use crate::kernel::{Atom, Literal, PredKey, Program, Rule, Term, BUILTIN_MODULE};

/// Whether some rule already builds trees with `pt/2`.
pub fn carries_proof_trees(p: &Program) -> bool {
    p.rules.iter().any(|r| {
        r.body.iter().any(|l| {
            let a = &l.atom;
            a.predicate == "pt" && a.args.len() == 2 && a.module.as_deref().is_none_or(|m| m == BUILTIN_MODULE)
        })
    })
}

struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    fn var(&mut self, base: &str) -> Term {
        let mut k = 0;
        loop {
            let name = if k == 0 { base.to_string() } else { format!("{base}{k}") };
            if self.used.insert(name.clone()) {
                return Term::var(name);
            }
            k += 1;
        }
    }
}

/// Predicates defined by at least one rule with a body get a tree argument.
/// Their rules end with `pt(PT, t(Head, RuleName, Child..., SideCondition...))`;
/// children of other body atoms are `t(Atom, fact)` leaves. Programs that
/// already use `pt/2` are returned unchanged.
pub fn auto_pt(p: &Program) -> Program {
    if carries_proof_trees(p) {
        return p.clone();
    }
    let instrumented: BTreeSet<PredKey> =
        p.rules.iter().filter(|r| !r.body.is_empty()).map(|r| r.head.key()).collect();
    let idb = p.idb();
    let mut rules = Vec::with_capacity(p.rules.len());
    for rule in &p.rules {
        if !instrumented.contains(&rule.head.key()) {
            rules.push(rule.clone());
            continue;
        }
        let mut fresh = Fresh { used: rule.variables().into_iter().collect() };
        let tree = fresh.var("PT");
        let mut body = Vec::with_capacity(rule.body.len() + 1);
        let mut children = Vec::new();
        let mut sides = Vec::new();
        for lit in &rule.body {
            let atom = &lit.atom;
            let mut lit = lit.clone();
            if is_builtin_atom(atom, &idb) {
                sides.push(Atom { module: None, ..atom.clone() }.to_term());
            } else if instrumented.contains(&atom.key()) {
                if lit.is_negated() {
                    lit.atom.args.push(fresh.var("_PT"));
                } else {
                    let t = fresh.var("T");
                    children.push(t.clone());
                    lit.atom.args.push(t);
                }
            } else if !lit.is_negated() {
                children.push(Term::compound("t", vec![atom.to_term(), Term::constant(super::FACT_TAG)]));
            }
            body.push(lit);
        }
        let mut targs = vec![rule.head.to_term(), Term::constant(rule.name.clone())];
        targs.extend(children);
        targs.extend(sides);
        body.push(Literal::positive(Atom::builtin("pt", vec![tree.clone(), Term::compound("t", targs)])));
        let mut head = rule.head.clone();
        head.args.push(tree);
        rules.push(Rule { name: rule.name.clone(), head, body, span: rule.span.clone() });
    }
    Program::new(rules)
}
