use crate::kernel::{Substitute, Substitution, Term};
use crate::syntax::print_term;
use crate::xml::XmlTerm;

use super::{Documents, HybridError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Child(String),
    /// Keeps elements whose attribute equals the value, compared as text.
    Filter { attr: String, value: Term },
    AttrAccess(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathRoot {
    Doc(String),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathExpr {
    pub root: PathRoot,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathValue {
    Element(XmlTerm),
    Text(String),
}

impl PathValue {
    pub fn to_term(&self) -> Term {
        match self {
            PathValue::Element(e) => e.to_term(),
            PathValue::Text(s) => Term::constant(s.clone()),
        }
    }
}

fn name_of(t: &Term) -> Option<String> {
    match t {
        Term::Const(c) => Some(c.clone()),
        Term::Num(n) => Some(n.canonical_text()),
        _ => None,
    }
}

impl PathExpr {
    /// Reads `doc(Name)/tag::[@a=V]/...@attr` or `Var@attr` style terms.
    pub fn from_term(t: &Term) -> Result<PathExpr, HybridError> {
        let bad = || HybridError::BadPath(print_term(t));
        let mut steps = Vec::new();
        let root = Self::collect(t, &mut steps).ok_or_else(bad)?;
        let last = steps.len().saturating_sub(1);
        if steps.iter().enumerate().any(|(i, s)| matches!(s, Step::AttrAccess(_)) && i != last) {
            return Err(bad());
        }
        Ok(PathExpr { root, steps })
    }

    fn collect(t: &Term, steps: &mut Vec<Step>) -> Option<PathRoot> {
        match t {
            Term::Var(v) => Some(PathRoot::Var(v.clone())),
            Term::Compound(f, args) if f == "doc" && args.len() == 1 => Some(PathRoot::Doc(name_of(&args[0])?)),
            Term::Compound(f, args) if f == "/" && args.len() == 2 => {
                let root = Self::collect(&args[0], steps)?;
                Self::step(&args[1], steps)?;
                Some(root)
            }
            Term::Compound(f, args) if f == "@" && args.len() == 2 => {
                let root = Self::collect(&args[0], steps)?;
                steps.push(Step::AttrAccess(name_of(&args[1])?));
                Some(root)
            }
            _ => None,
        }
    }

    fn step(t: &Term, steps: &mut Vec<Step>) -> Option<()> {
        match t {
            Term::Const(tag) => steps.push(Step::Child(tag.clone())),
            Term::Compound(f, args) if f == "::" && args.len() == 2 => {
                steps.push(Step::Child(name_of(&args[0])?));
                for cond in args[1].as_proper_list()? {
                    let Term::Compound(eq, sides) = cond else { return None };
                    if eq != "=" || sides.len() != 2 {
                        return None;
                    }
                    let Term::Compound(at, a) = &sides[0] else { return None };
                    if at != "@" || a.len() != 1 {
                        return None;
                    }
                    steps.push(Step::Filter { attr: name_of(&a[0])?, value: sides[1].clone() });
                }
            }
            Term::Compound(f, args) if f == "@" && args.len() == 2 => {
                Self::step(&args[0], steps)?;
                steps.push(Step::AttrAccess(name_of(&args[1])?));
            }
            _ => return None,
        }
        Some(())
    }

    /// Variables that must be bound before evaluation.
    pub fn inputs(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        if let PathRoot::Var(v) = &self.root {
            out.insert(v.clone());
        }
        for s in &self.steps {
            if let Step::Filter { value, .. } = s {
                out.extend(value.variable_set());
            }
        }
        out
    }

    pub(crate) fn resolve_root(&self, docs: &Documents, env: &Substitution) -> Result<XmlTerm, HybridError> {
        match &self.root {
            PathRoot::Doc(name) => Ok(docs.get(name)?.into_owned()),
            PathRoot::Var(v) => {
                let t = Term::var(v.clone()).apply(env);
                XmlTerm::from_term(&t).ok_or_else(|| HybridError::NotAnElement(print_term(&t)))
            }
        }
    }
}

/// Applies the steps to `doc`; every result pairs with the unchanged `env`.
pub fn path_eval(
    doc: &XmlTerm,
    steps: &[Step],
    env: &Substitution,
) -> Result<Vec<(PathValue, Substitution)>, HybridError> {
    let mut cur = vec![PathValue::Element(doc.clone())];
    for step in steps {
        let mut next = Vec::new();
        for v in cur {
            let e = match v {
                PathValue::Element(e) => e,
                PathValue::Text(_) => return Err(HybridError::AttrAccessOnText),
            };
            match step {
                Step::Child(tag) => {
                    next.extend(e.elements().filter(|c| &c.tag == tag).cloned().map(PathValue::Element));
                }
                Step::Filter { attr, value } => {
                    let v = value.apply(env);
                    if let Some(var) = v.variables().into_iter().next() {
                        return Err(HybridError::UnboundFilterVariable { var });
                    }
                    if e.attr(attr) == Some(v.canonical_text().as_str()) {
                        next.push(PathValue::Element(e));
                    }
                }
                Step::AttrAccess(name) => {
                    if let Some(a) = e.attr(name) {
                        next.push(PathValue::Text(a.to_string()));
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur.into_iter().map(|v| (v, env.clone())).collect())
}
