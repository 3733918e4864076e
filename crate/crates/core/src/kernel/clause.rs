use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::term::Term;

/// Module prefix marking embedded builtin calls (`prolog:G`).
pub const BUILTIN_MODULE: &str = "prolog";

/// Position in a source file, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.file.is_empty() {
            write!(f, "{}:{}", self.line, self.column)
        } else {
            write!(f, "{}:{}:{}", self.file, self.line, self.column)
        }
    }
}

/// Identity of a predicate symbol: optional module, name and arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PredKey {
    pub module: Option<String>,
    pub name: String,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredKey { module: None, name: name.into(), arity }
    }

    pub fn with_module(module: impl Into<String>, name: impl Into<String>, arity: usize) -> Self {
        PredKey { module: Some(module.into()), name: name.into(), arity }
    }

    /// Parses `name/arity` or `module:name/arity`.
    pub fn parse(text: &str) -> Option<PredKey> {
        let (left, arity) = text.trim().rsplit_once('/')?;
        let arity = arity.trim().parse().ok()?;
        let (module, name) = match left.split_once(':') {
            Some((m, n)) => (Some(m.trim().to_string()), n.trim().to_string()),
            None => (None, left.trim().to_string()),
        };
        (!name.is_empty()).then_some(PredKey { module, name, arity })
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.module {
            Some(m) => write!(f, "{}:{}/{}", m, self.name, self.arity),
            None => write!(f, "{}/{}", self.name, self.arity),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
    pub module: Option<String>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args, module: None }
    }

    pub fn builtin(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args, module: Some(BUILTIN_MODULE.to_string()) }
    }

    pub fn key(&self) -> PredKey {
        PredKey {
            module: self.module.clone(),
            name: self.predicate.clone(),
            arity: self.args.len(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_builtin_call(&self) -> bool {
        self.module.as_deref() == Some(BUILTIN_MODULE)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    /// The atom as a term, without its module prefix.
    pub fn to_term(&self) -> Term {
        Term::compound(self.predicate.clone(), self.args.clone())
    }

    /// Inverse of [`Atom::to_term`] for callable terms; `M:G` sets the module.
    pub fn from_term(term: &Term) -> Option<Atom> {
        match term {
            Term::Const(c) => Some(Atom::new(c.clone(), vec![])),
            Term::Compound(f, args) if f == ":" && args.len() == 2 => {
                let module = args[0].as_const()?.to_string();
                let mut inner = Atom::from_term(&args[1])?;
                inner.module = Some(module);
                Some(inner)
            }
            Term::Compound(f, args) => Some(Atom::new(f.clone(), args.clone())),
            _ => None,
        }
    }

    /// The atom as a term including its module prefix (`M:G`).
    pub fn to_qualified_term(&self) -> Term {
        match &self.module {
            Some(m) => Term::Compound(":".into(), vec![Term::constant(m.clone()), self.to_term()]),
            None => self.to_term(),
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.module
            .cmp(&other.module)
            .then_with(|| self.predicate.cmp(&other.predicate))
            .then_with(|| self.args.len().cmp(&other.args.len()))
            .then_with(|| self.args.cmp(&other.args))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_atom(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Polarity {
    Positive,
    NegatedDefault,
}

#[derive(Debug, Clone)]
pub struct Literal {
    pub polarity: Polarity,
    pub atom: Atom,
    pub span: Option<SourceSpan>,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal { polarity: Polarity::Positive, atom, span: None }
    }

    pub fn negated(atom: Atom) -> Self {
        Literal { polarity: Polarity::NegatedDefault, atom, span: None }
    }

    pub fn is_negated(&self) -> bool {
        self.polarity == Polarity::NegatedDefault
    }
}

// Spans are provenance only and never part of structural equality.
impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.polarity == other.polarity && self.atom == other.atom
    }
}

impl Eq for Literal {}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_literal(self))
    }
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub name: String,
    pub head: Atom,
    pub body: Vec<Literal>,
    pub span: Option<SourceSpan>,
}

impl Rule {
    pub fn new(name: impl Into<String>, head: Atom, body: Vec<Literal>) -> Self {
        Rule { name: name.into(), head, body, span: None }
    }

    pub fn fact(name: impl Into<String>, head: Atom) -> Self {
        Rule::new(name, head, vec![])
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.head.args.iter().for_each(|a| a.collect_vars(&mut out));
        for lit in &self.body {
            lit.atom.args.iter().for_each(|a| a.collect_vars(&mut out));
        }
        out
    }

    /// `{:?}`-free location string for error messages.
    pub fn location(&self) -> String {
        match &self.span {
            Some(s) => format!("rule {} at {}", self.name, s),
            None => format!("rule {}", self.name),
        }
    }
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.head == other.head && self.body == other.body
    }
}

impl Eq for Rule {}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_rule(self))
    }
}

/// An ordered rule list; facts are rules with an empty body.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Appends ground facts, naming them after the current rule count.
    pub fn add_facts(&mut self, facts: impl IntoIterator<Item = Atom>) {
        for atom in facts {
            let name = self.fresh_rule_name();
            self.rules.push(Rule::fact(name, atom));
        }
    }

    pub fn fresh_rule_name(&self) -> String {
        let mut k = self.rules.len() + 1;
        loop {
            let name = format!("r{k}");
            if self.rule(&name).is_none() {
                return name;
            }
            k += 1;
        }
    }

    /// Predicates defined by at least one rule head.
    pub fn idb(&self) -> BTreeSet<PredKey> {
        self.rules.iter().map(|r| r.head.key()).collect()
    }

    /// Predicates occurring only in bodies.
    pub fn edb(&self) -> BTreeSet<PredKey> {
        let idb = self.idb();
        self.rules
            .iter()
            .flat_map(|r| r.body.iter().map(|l| l.atom.key()))
            .filter(|k| !idb.contains(k))
            .collect()
    }

    /// Every predicate symbol occurring anywhere.
    pub fn predicates(&self) -> BTreeSet<PredKey> {
        let mut out = self.idb();
        out.extend(self.rules.iter().flat_map(|r| r.body.iter().map(|l| l.atom.key())));
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_program(self))
    }
}
