//! Proof trees carried as `t(Conclusion, Tag, Child..., SideCondition...)`
//! terms in the last argument of derived atoms.

use std::collections::BTreeSet;

use super::builtins::{call_builtin, is_builtin_atom};
use super::store::FactStore;
use crate::kernel::{Atom, Literal, PredKey, Program, Rule, Substitute, Substitution, Term, BUILTIN_MODULE};
use crate::syntax::{print_term, write_term};

/// Tag of leaves standing for stored facts.
pub const FACT_TAG: &str = "fact";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Atom,
    pub tag: String,
    pub children: Vec<ProofTree>,
    pub side_conditions: Vec<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Dot,
    Term,
}

impl ProofTree {
    pub fn leaf(conclusion: Atom, tag: impl Into<String>) -> Self {
        ProofTree { conclusion, tag: tag.into(), children: vec![], side_conditions: vec![] }
    }

    pub fn to_term(&self) -> Term {
        let mut args = vec![self.conclusion.to_term(), Term::constant(self.tag.clone())];
        args.extend(self.children.iter().map(ProofTree::to_term));
        args.extend(self.side_conditions.iter().cloned());
        Term::compound("t", args)
    }

    /// The tree without side conditions: the explanation shown to users.
    pub fn to_explanation_term(&self) -> Term {
        let mut args = vec![self.conclusion.to_term(), Term::constant(self.tag.clone())];
        args.extend(self.children.iter().map(ProofTree::to_explanation_term));
        Term::compound("t", args)
    }

    /// Reads a `t/N` term; arguments after the tag that are themselves
    /// trees are children, the rest are side conditions.
    pub fn from_term(t: &Term) -> Option<ProofTree> {
        let Term::Compound(f, args) = t else {
            return None;
        };
        if f != "t" || args.len() < 2 || !args[0].is_ground() {
            return None;
        }
        let conclusion = Atom::from_term(&args[0])?;
        let tag = match &args[1] {
            Term::Const(c) => c.clone(),
            Term::Num(n) => n.canonical_text(),
            _ => return None,
        };
        let mut children = Vec::new();
        let mut side_conditions = Vec::new();
        for a in &args[2..] {
            match ProofTree::from_term(a) {
                Some(child) if side_conditions.is_empty() => children.push(child),
                _ => side_conditions.push(a.clone()),
            }
        }
        Some(ProofTree { conclusion, tag, children, side_conditions })
    }

    /// The tree stored in a fact's last argument, if that argument is a tree
    /// whose conclusion is the rest of the fact.
    pub fn of_fact(fact: &Atom) -> Option<ProofTree> {
        let (last, rest) = fact.args.split_last()?;
        let tree = ProofTree::from_term(last)?;
        let bare = Atom { predicate: fact.predicate.clone(), args: rest.to_vec(), module: None };
        (tree.conclusion == bare).then_some(tree)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn render(&self, format: RenderFormat) -> String {
        match format {
            RenderFormat::Term => write_term(&self.to_explanation_term()),
            RenderFormat::Ascii => {
                let mut out = String::new();
                self.ascii(0, &mut out);
                out
            }
            RenderFormat::Dot => {
                let mut out = String::from("digraph proof {\n");
                let mut next = 0;
                self.dot(&mut next, &mut out);
                out.push_str("}\n");
                out
            }
        }
    }

    fn ascii(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!("{pad}{}  [{}]\n", write_term(&self.conclusion.to_term()), self.tag));
        for c in &self.children {
            c.ascii(depth + 1, out);
        }
        for s in &self.side_conditions {
            out.push_str(&format!("{pad}  {{{}}}\n", write_term(s)));
        }
    }

    fn dot(&self, next: &mut usize, out: &mut String) -> usize {
        let me = *next;
        *next += 1;
        let mut label = format!("{}\\n[{}]", write_term(&self.conclusion.to_term()), self.tag);
        for s in &self.side_conditions {
            label.push_str(&format!("\\n{}", write_term(s)));
        }
        out.push_str(&format!("  n{me} [shape=box, label=\"{}\"];\n", label.replace('"', "\\\"")));
        for c in &self.children {
            let id = c.dot(next, out);
            out.push_str(&format!("  n{me} -> n{id};\n"));
        }
        me
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid proof of {conclusion}: {message}")]
pub struct ProofError {
    pub conclusion: String,
    pub message: String,
}

fn pt_template(rule: &Rule) -> Option<(&Term, &Term)> {
    let tree_var = rule.head.args.last()?;
    rule.body.iter().find_map(|l| {
        let a = &l.atom;
        let is_pt = a.predicate == "pt" && a.args.len() == 2 && a.module.as_deref().is_none_or(|m| m == BUILTIN_MODULE);
        (is_pt && !l.is_negated() && &a.args[0] == tree_var).then(|| (&a.args[0], &a.args[1]))
    })
}

fn with_tree(atom: &Atom, tree: &ProofTree) -> Atom {
    let mut a = atom.clone();
    a.args.push(tree.to_term());
    a
}

/// Replays a tree against the program that produced it: each node must be
/// justified by a rule whose `pt` template matches the node, whose positive
/// body atoms are the children (and hold in `store`), whose builtin goals
/// succeed and whose negated goals have no match in `store`. Leaves tagged
/// `fact` must be stored facts.
pub fn validate_proof(tree: &ProofTree, p: &Program, store: &FactStore) -> Result<(), ProofError> {
    let idb = p.idb();
    validate_node(tree, p, &idb, store)
}

fn validate_node(node: &ProofTree, p: &Program, idb: &BTreeSet<PredKey>, store: &FactStore) -> Result<(), ProofError> {
    let fail = |message: String| ProofError { conclusion: node.conclusion.to_string(), message };
    if !node.conclusion.is_ground() {
        return Err(fail("conclusion is not ground".into()));
    }
    if node.tag == FACT_TAG && node.children.is_empty() && node.side_conditions.is_empty() {
        return if store.contains(&node.conclusion) {
            Ok(())
        } else {
            Err(fail("leaf is not a stored fact".into()))
        };
    }
    let node_term = node.to_term();
    let mut reasons = Vec::new();
    for rule in &p.rules {
        if rule.head.predicate != node.conclusion.predicate || rule.head.arity() != node.conclusion.arity() + 1 {
            continue;
        }
        let rule = rule.rename_vars("_v");
        let Some((_, template)) = pt_template(&rule) else {
            continue;
        };
        let mut s = Substitution::new();
        let bare: Vec<&Term> = rule.head.args[..rule.head.args.len() - 1].iter().collect();
        let head_ok = bare.iter().zip(&node.conclusion.args).all(|(a, b)| s.unify(a, b));
        if !head_ok || !s.unify(template, &node_term) {
            continue;
        }
        match check_body(&rule, &s, node, idb, store) {
            Ok(()) => {
                for c in &node.children {
                    validate_node(c, p, idb, store)?;
                }
                return Ok(());
            }
            Err(m) => reasons.push(format!("{}: {m}", rule.name)),
        }
    }
    if reasons.is_empty() {
        Err(fail(format!("no rule with a matching pt template for tag {}", node.tag)))
    } else {
        Err(fail(reasons.join("; ")))
    }
}

fn check_body(
    rule: &Rule,
    s: &Substitution,
    node: &ProofTree,
    idb: &BTreeSet<PredKey>,
    store: &FactStore,
) -> Result<(), String> {
    let mut unused: Vec<&ProofTree> = node.children.iter().collect();
    let mut s = s.clone();
    let mut pending: Vec<&Literal> = Vec::new();
    for lit in &rule.body {
        let atom = &lit.atom;
        if lit.is_negated() || is_builtin_atom(atom, idb) {
            pending.push(lit);
            continue;
        }
        let hit = unused.iter().enumerate().find_map(|(i, c)| {
            let mut s2 = s.clone();
            let target = if c.tag == FACT_TAG && c.children.is_empty() { c.conclusion.clone() } else { with_tree(&c.conclusion, c) };
            s2.unify_atoms(&atom.apply(&s), &target).then_some((i, s2))
        });
        let Some((i, s2)) = hit else {
            return Err(format!("body atom {} matches no child", atom.apply(&s)));
        };
        unused.remove(i);
        s = s2;
        let g = atom.apply(&s);
        if !store.contains(&g) {
            return Err(format!("body atom {g} is not in the model"));
        }
    }
    if let Some(c) = unused.first() {
        return Err(format!("child {} is not used by the rule", c.conclusion));
    }
    // Builtins run once their inputs are bound; negated goals are checked last.
    while !pending.is_empty() {
        let bound: BTreeSet<String> = s.iter().filter(|(_, t)| t.is_ground()).map(|(v, _)| v.clone()).collect();
        let pick = pending
            .iter()
            .position(|l| !l.is_negated() && super::builtins::is_ready(&l.atom, &bound))
            .or_else(|| pending.iter().position(|l| !l.is_negated()))
            .unwrap_or(0);
        let lit = pending.remove(pick);
        let atom = &lit.atom;
        if lit.is_negated() {
            let g = atom.apply(&s);
            if store.any_match(&g) {
                return Err(format!("negated goal {g} has a match"));
            }
            continue;
        }
        if atom.predicate == "pt" {
            continue;
        }
        let answers = call_builtin(atom, &s).map_err(|e| e.to_string())?;
        match answers.into_iter().next() {
            Some(s2) => s = s2,
            None => return Err(format!("side condition {} fails", atom.apply(&s))),
        }
    }
    Ok(())
}

/// Finds stored facts matching `pattern` directly or with one extra trailing
/// tree argument, and returns their proof trees. Facts without a tree give a
/// one-node `fact` tree.
pub fn find_proofs(store: &FactStore, pattern: &Atom) -> Vec<ProofTree> {
    let mut out = Vec::new();
    let mut direct = pattern.clone();
    direct.module = None;
    let s = Substitution::new();
    for m in store.matches(&direct, &s, 0..store.len()) {
        let fact = direct.apply(&m);
        out.push(ProofTree::of_fact(&fact).unwrap_or_else(|| ProofTree::leaf(fact, FACT_TAG)));
    }
    let mut extended = direct.clone();
    extended.args.push(Term::var("_Tree"));
    for m in store.matches(&extended, &s, 0..store.len()) {
        if let Some(t) = ProofTree::of_fact(&extended.apply(&m)) {
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Printed form of a fact whose tree argument is replaced by its
/// explanation, in unquoted style.
pub fn explain_fact(fact: &Atom) -> String {
    match ProofTree::of_fact(fact) {
        Some(tree) => {
            let mut a = fact.clone();
            *a.args.last_mut().expect("tree argument") = tree.to_explanation_term();
            write_term(&a.to_term())
        }
        None => write_term(&fact.to_term()),
    }
}

pub fn print_tree_term(tree: &ProofTree) -> String {
    print_term(&tree.to_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn tree(s: &str) -> ProofTree {
        ProofTree::from_term(&parse_term(s).unwrap()).unwrap()
    }

    #[test]
    fn term_round_trip() {
        let text = "t(route('KT', 'Mue', 295), r, t(street('KT', 'Wue', 15), f1), t(route('Wue', 'Mue', 280), e, t(street('Wue', 'Mue', 280), f2)), 295 is 15+280)";
        let t = tree(text);
        assert_eq!(t.children.len(), 2);
        assert_eq!(t.side_conditions.len(), 1);
        assert_eq!(print_tree_term(&t), text);
        assert_eq!(
            t.render(RenderFormat::Term),
            "t(route(KT, Mue, 295), r, t(street(KT, Wue, 15), f1), t(route(Wue, Mue, 280), e, t(street(Wue, Mue, 280), f2)))"
        );
    }

    #[test]
    fn leaf_renders() {
        let t = tree("t(street('KT', 'Wue', 15), f1)");
        assert_eq!(t.render(RenderFormat::Term), "t(street(KT, Wue, 15), f1)");
        assert_eq!(t.render(RenderFormat::Ascii), "street(KT, Wue, 15)  [f1]\n");
        let dot = t.render(RenderFormat::Dot);
        assert_eq!(dot.matches("n0 [").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn ascii_indents_children() {
        let t = tree("t(p(a), r, t(q(a), fact), t(s(a), fact))");
        assert_eq!(t.render(RenderFormat::Ascii), "p(a)  [r]\n  q(a)  [fact]\n  s(a)  [fact]\n");
    }

    #[test]
    fn of_fact_checks_conclusion() {
        let a = crate::syntax::atom_from_term(&parse_term("p(a, t(p(a), r1))").unwrap()).unwrap();
        assert!(ProofTree::of_fact(&a).is_some());
        let b = crate::syntax::atom_from_term(&parse_term("p(b, t(p(a), r1))").unwrap()).unwrap();
        assert!(ProofTree::of_fact(&b).is_none());
    }
}
