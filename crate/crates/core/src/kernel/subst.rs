use std::collections::BTreeMap;
use std::fmt;

use super::clause::{Atom, Literal, Rule};
use super::term::Term;

/// A finite map from variable names to terms.
///
/// Every substitution built through [`Substitution::unify`] or
/// [`Substitution::bind`] stays idempotent: no bound variable occurs in any
/// binding's value, so one application is always enough.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    /// Builds a substitution from raw pairs without normalizing them.
    /// Callers are responsible for idempotence.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: Into<String>,
    {
        Substitution { bindings: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }

    /// Adds `var ↦ term`, composing with existing bindings. Fails on the
    /// occurs check or when `var` is already bound to something that does
    /// not unify with `term`.
    pub fn bind(&mut self, var: &str, term: &Term) -> bool {
        self.unify(&Term::Var(var.to_string()), term)
    }

    fn bind_unbound(&mut self, var: &str, value: Term) {
        for existing in self.bindings.values_mut() {
            if existing.occurs(var) {
                *existing = replace_var(existing, var, &value);
            }
        }
        debug_assert!(!value.occurs(var));
        self.bindings.insert(var.to_string(), value);
    }

    fn resolve<'a>(&'a self, t: &'a Term) -> &'a Term {
        match t {
            Term::Var(v) => self.bindings.get(v).unwrap_or(t),
            _ => t,
        }
    }

    /// Extends `self` to a most general unifier of `a` and `b`. On failure
    /// `self` may be partially extended; clone first if that matters.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.resolve(a).clone();
        let b = self.resolve(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), _) => {
                let value = b.apply(self);
                if value.occurs(x) {
                    return false;
                }
                self.bind_unbound(x, value);
                true
            }
            (_, Term::Var(y)) => {
                let value = a.apply(self);
                if value.occurs(y) {
                    return false;
                }
                self.bind_unbound(y, value);
                true
            }
            (Term::Compound(fa, aa), Term::Compound(fb, ab)) => {
                fa == fb
                    && aa.len() == ab.len()
                    && aa.iter().zip(ab).all(|(x, y)| self.unify(x, y))
            }
            _ => a == b,
        }
    }

    pub fn unify_atoms(&mut self, a: &Atom, b: &Atom) -> bool {
        a.key() == b.key() && a.args.iter().zip(&b.args).all(|(x, y)| self.unify(x, y))
    }

    /// Restricts the substitution to the given variables.
    pub fn project<'a>(&self, vars: impl IntoIterator<Item = &'a str>) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            if let Some(t) = self.bindings.get(v) {
                out.bindings.insert(v.to_string(), t.clone());
            }
        }
        out
    }
}

fn replace_var(t: &Term, var: &str, value: &Term) -> Term {
    match t {
        Term::Var(v) if v == var => value.clone(),
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| replace_var(a, var, value)).collect())
        }
        _ => t.clone(),
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of two terms, with occurs check.
pub fn mgu(a: &Term, b: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    s.unify(a, b).then_some(s)
}

/// Most general unifier of two atoms; atoms with different predicate keys
/// never unify.
pub fn mgu_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    let mut s = Substitution::new();
    s.unify_atoms(a, b).then_some(s)
}

/// Things a substitution can be applied to.
pub trait Substitute: Sized {
    fn apply(&self, s: &Substitution) -> Self;

    /// Renames every variable `V` to `V<suffix>`.
    fn rename_vars(&self, suffix: &str) -> Self;
}

impl Substitute for Term {
    fn apply(&self, s: &Substitution) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| a.apply(s)).collect())
            }
            _ => self.clone(),
        }
    }

    fn rename_vars(&self, suffix: &str) -> Term {
        match self {
            Term::Var(v) => Term::Var(format!("{v}{suffix}")),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| a.rename_vars(suffix)).collect())
            }
            _ => self.clone(),
        }
    }
}

impl Substitute for Atom {
    fn apply(&self, s: &Substitution) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.apply(s)).collect(),
            module: self.module.clone(),
        }
    }

    fn rename_vars(&self, suffix: &str) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.rename_vars(suffix)).collect(),
            module: self.module.clone(),
        }
    }
}

impl Substitute for Literal {
    fn apply(&self, s: &Substitution) -> Literal {
        Literal { polarity: self.polarity, atom: self.atom.apply(s), span: self.span.clone() }
    }

    fn rename_vars(&self, suffix: &str) -> Literal {
        Literal {
            polarity: self.polarity,
            atom: self.atom.rename_vars(suffix),
            span: self.span.clone(),
        }
    }
}

impl Substitute for Rule {
    fn apply(&self, s: &Substitution) -> Rule {
        Rule {
            name: self.name.clone(),
            head: self.head.apply(s),
            body: self.body.iter().map(|l| l.apply(s)).collect(),
            span: self.span.clone(),
        }
    }

    fn rename_vars(&self, suffix: &str) -> Rule {
        Rule {
            name: self.name.clone(),
            head: self.head.rename_vars(suffix),
            body: self.body.iter().map(|l| l.rename_vars(suffix)).collect(),
            span: self.span.clone(),
        }
    }
}

/// Applies `s` to `t`.
pub fn apply<T: Substitute>(s: &Substitution, t: &T) -> T {
    t.apply(s)
}

/// Renames all variables of `rule` by appending `suffix`. Distinct suffixes
/// give copies that share no variables, provided no original variable name
/// already ends in one suffix while another does not.
pub fn rename_apart(rule: &Rule, suffix: &str) -> Rule {
    rule.rename_vars(suffix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Literal;

    fn c(s: &str) -> Term {
        Term::constant(s)
    }
    fn v(s: &str) -> Term {
        Term::var(s)
    }
    fn f(name: &str, args: Vec<Term>) -> Term {
        Term::compound(name, args)
    }

    #[test]
    fn mgu_structural_match() {
        let s = mgu(&f("f", vec![v("X"), c("a")]), &f("f", vec![c("b"), v("Y")])).unwrap();
        assert_eq!(s, Substitution::from_pairs([("X", c("b")), ("Y", c("a"))]));
    }

    #[test]
    fn mgu_identity_is_empty() {
        let s = mgu(&f("p", vec![v("X")]), &f("p", vec![v("X")])).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn mgu_occurs_check_fails() {
        assert!(mgu(&v("X"), &f("f", vec![v("X")])).is_none());
    }

    #[test]
    fn mgu_chained_bindings_stay_idempotent() {
        let a = f("g", vec![v("X"), v("Y"), v("Z")]);
        let b = f("g", vec![v("Y"), v("Z"), c("k")]);
        let s = mgu(&a, &b).unwrap();
        assert_eq!(a.apply(&s), b.apply(&s));
        assert_eq!(a.apply(&s).apply(&s), a.apply(&s));
        assert_eq!(s.get("X"), Some(&c("k")));
    }

    #[test]
    fn atoms_with_different_keys_never_unify() {
        let a = Atom::new("p", vec![v("X")]);
        let b = Atom::new("p", vec![v("X"), v("Y")]);
        assert!(mgu_atoms(&a, &b).is_none());
        let q = Atom::new("q", vec![v("X")]);
        assert!(mgu_atoms(&a, &q).is_none());
    }

    #[test]
    fn apply_replaces_bound_only() {
        let s = Substitution::from_pairs([("X", c("b"))]);
        assert_eq!(f("f", vec![v("X"), v("Y")]).apply(&s), f("f", vec![c("b"), v("Y")]));
        let t = f("f", vec![v("X")]);
        assert_eq!(t.apply(&Substitution::new()), t);
    }

    #[test]
    fn apply_to_uncle_rule() {
        let rule = Rule::new(
            "r1",
            Atom::new("uncle", vec![v("X"), v("Z")]),
            vec![
                Literal::positive(Atom::new("parent", vec![v("X"), v("Y")])),
                Literal::positive(Atom::new("brother", vec![v("Y"), v("Z")])),
            ],
        );
        let s = Substitution::from_pairs([("X", c("b")), ("Y", c("a"))]);
        let expected = Rule::new(
            "r1",
            Atom::new("uncle", vec![c("b"), v("Z")]),
            vec![
                Literal::positive(Atom::new("parent", vec![c("b"), c("a")])),
                Literal::positive(Atom::new("brother", vec![c("a"), v("Z")])),
            ],
        );
        assert_eq!(apply(&s, &rule), expected);
    }

    #[test]
    fn rename_apart_cases() {
        let rule = Rule::new(
            "r1",
            Atom::new("p", vec![v("X")]),
            vec![Literal::positive(Atom::new("q", vec![v("X")]))],
        );
        let r1 = rename_apart(&rule, "_1");
        assert_eq!(r1.head.args[0], v("X_1"));
        assert_eq!(r1.body[0].atom.args[0], v("X_1"));
        let r2 = rename_apart(&rule, "_2");
        let vars1: Vec<_> = r1.variables();
        assert!(r2.variables().iter().all(|x| !vars1.contains(x)));
        let fact = Rule::fact("f", Atom::new("p", vec![c("a")]));
        assert_eq!(rename_apart(&fact, "_1"), fact);
    }
}
