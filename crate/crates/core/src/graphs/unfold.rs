use std::collections::BTreeSet;

use super::{build_pdg, reachable, GraphError, Node};
use crate::kernel::{apply, mgu_atoms, rename_apart, Literal, PredKey, Program, Rule, Substitute};

/// Resolves body literal `index` (1-based) of `r1` against the head of
/// `r2`. The result is named `r1+r2`.
pub fn unfold_helper(r1: &Rule, r2: &Rule, index: usize) -> Result<Rule, GraphError> {
    let lit = index
        .checked_sub(1)
        .and_then(|i| r1.body.get(i))
        .ok_or_else(|| GraphError::IndexOutOfRange { rule: r1.name.clone(), index })?;
    if lit.is_negated() {
        return Err(GraphError::NegatedLiteral { rule: r1.name.clone(), index });
    }
    if lit.atom.is_builtin_call() {
        return Err(GraphError::BuiltinLiteral { rule: r1.name.clone(), index });
    }
    let taken: BTreeSet<String> = r1.variables().into_iter().collect();
    let mut k = 1;
    let helper = loop {
        let renamed = rename_apart(r2, &format!("_{k}"));
        if renamed.variables().iter().all(|v| !taken.contains(v)) {
            break renamed;
        }
        k += 1;
    };
    let theta = mgu_atoms(&helper.head, &lit.atom).ok_or_else(|| GraphError::NotUnifiable {
        rule: r1.name.clone(),
        helper: r2.name.clone(),
        index,
    })?;
    let mut body: Vec<Literal> = Vec::with_capacity(r1.body.len() + helper.body.len());
    body.extend(r1.body[..index - 1].iter().map(|l| l.apply(&theta)));
    body.extend(helper.body.iter().map(|l| l.apply(&theta)));
    body.extend(r1.body[index..].iter().map(|l| l.apply(&theta)));
    let mut out = Rule::new(format!("{}+{}", r1.name, r2.name), apply(&theta, &r1.head), body);
    out.span = r1.span.clone();
    Ok(out)
}

/// Compares the predicates reachable from `root` in both programs, ignoring
/// the helper predicates.
pub fn equivalent_modulo_helpers(
    p1: &Program,
    p2: &Program,
    root: &PredKey,
    helpers: &BTreeSet<PredKey>,
) -> Result<bool, GraphError> {
    let node = Node::Pred(root.clone());
    let strip = |p: &Program| -> Result<BTreeSet<Node>, GraphError> {
        let mut set = reachable(&build_pdg(p), &node)?;
        set.retain(|n| !matches!(n, Node::Pred(k) if helpers.contains(k)));
        Ok(set)
    };
    Ok(strip(p1)? == strip(p2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn rules(s: &str) -> Vec<Rule> {
        parse_program(s).unwrap().rules
    }

    #[test]
    fn helper_unfolds() {
        let rs = rules("a :- b, h.\nh :- c, d.");
        let r3 = unfold_helper(&rs[0], &rs[1], 2).unwrap();
        assert_eq!(r3.name, "r1+r2");
        assert_eq!(r3.body, rules("a :- b, c, d.")[0].body);
    }

    #[test]
    fn binding_propagates() {
        let rs = rules("p(X) :- q(X).\nq(a).");
        let r3 = unfold_helper(&rs[0], &rs[1], 1).unwrap();
        assert_eq!(r3.head, rules("p(a).")[0].head);
        assert!(r3.body.is_empty());
    }

    #[test]
    fn helper_variables_are_renamed() {
        let rs = rules("p(X) :- q(X, Y), r(Y).\nq(A, Y) :- s(A, Y, Z).");
        let r3 = unfold_helper(&rs[0], &rs[1], 1).unwrap();
        let text = crate::syntax::print_rule(&r3);
        assert_eq!(text, "p(X) :- s(X, Y, Z_1), r(Y).");
    }

    #[test]
    fn errors() {
        let rs = rules("a :- not h.\nh :- c.\nb :- prolog:true.\nd :- e.");
        assert!(matches!(unfold_helper(&rs[0], &rs[1], 1), Err(GraphError::NegatedLiteral { .. })));
        assert!(matches!(unfold_helper(&rs[2], &rs[1], 1), Err(GraphError::BuiltinLiteral { .. })));
        assert!(matches!(unfold_helper(&rs[3], &rs[1], 1), Err(GraphError::NotUnifiable { .. })));
        assert!(matches!(unfold_helper(&rs[3], &rs[1], 0), Err(GraphError::IndexOutOfRange { .. })));
        assert!(matches!(unfold_helper(&rs[3], &rs[1], 2), Err(GraphError::IndexOutOfRange { .. })));
    }

    #[test]
    fn equivalence() {
        let a = PredKey::new("a", 0);
        let p1 = parse_program("a :- b, h.\nh :- c, d.").unwrap();
        let p2 = parse_program("a :- b, c, d.").unwrap();
        let h: BTreeSet<PredKey> = [PredKey::new("h", 0)].into();
        assert!(equivalent_modulo_helpers(&p1, &p2, &a, &h).unwrap());
        assert!(!equivalent_modulo_helpers(&p1, &p2, &a, &BTreeSet::new()).unwrap());
        assert!(equivalent_modulo_helpers(&p1, &p1, &a, &BTreeSet::new()).unwrap());
        let q1 = parse_program("a :- b.").unwrap();
        let q2 = parse_program("a :- c.").unwrap();
        assert!(!equivalent_modulo_helpers(&q1, &q2, &a, &BTreeSet::new()).unwrap());
        assert!(equivalent_modulo_helpers(&q1, &q2, &PredKey::new("zz", 0), &h).is_err());
    }
}
