use std::collections::HashMap;
use std::ops::Range;

use serde::Serialize;

use crate::kernel::{Atom, Number, PredKey, Substitution, Term};
use crate::syntax::{print_atom, print_term};

/// Principal functor of an argument, used as an index key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Principal {
    Const(String),
    Num(Number),
    Functor(String, usize),
}

fn principal(t: &Term) -> Option<Principal> {
    match t {
        Term::Var(_) => None,
        Term::Const(c) => Some(Principal::Const(c.clone())),
        Term::Num(n) => Some(Principal::Num(*n)),
        Term::Compound(f, args) => Some(Principal::Functor(f.clone(), args.len())),
    }
}

/// Ground facts in insertion order, indexed by predicate and by the
/// principal functor of each argument. Facts are numbered by insertion, so
/// "old", "delta" and "full" views are id ranges.
#[derive(Debug, Clone, Default)]
pub struct FactStore {
    facts: Vec<Atom>,
    ids: HashMap<Atom, usize>,
    by_pred: HashMap<PredKey, Vec<usize>>,
    by_arg: HashMap<(PredKey, usize, Principal), Vec<usize>>,
    delta: Range<usize>,
}

impl FactStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.ids.contains_key(atom)
    }

    /// Adds a ground atom; returns false if it was already present.
    pub fn insert(&mut self, atom: Atom) -> bool {
        debug_assert!(atom.is_ground(), "non-ground fact {atom}");
        if self.ids.contains_key(&atom) {
            return false;
        }
        let id = self.facts.len();
        let key = atom.key();
        for (i, arg) in atom.args.iter().enumerate() {
            if let Some(p) = principal(arg) {
                self.by_arg.entry((key.clone(), i, p)).or_default().push(id);
            }
        }
        self.by_pred.entry(key).or_default().push(id);
        self.ids.insert(atom.clone(), id);
        self.facts.push(atom);
        true
    }

    /// Facts added by the latest [`FactStore::mark_delta`] window.
    pub fn delta(&self) -> &[Atom] {
        &self.facts[self.delta.clone()]
    }

    pub(crate) fn set_delta(&mut self, range: Range<usize>) {
        self.delta = range;
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.facts.iter()
    }

    pub fn facts_of<'a>(&'a self, key: &PredKey) -> impl Iterator<Item = &'a Atom> + 'a {
        self.by_pred.get(key).into_iter().flatten().map(move |&i| &self.facts[i])
    }

    /// Facts with ids in `range` that unify with `pattern` under `s`; yields
    /// the extended substitutions. `pattern` must already have `s` applied.
    pub(crate) fn matches<'a>(
        &'a self,
        pattern: &'a Atom,
        s: &'a Substitution,
        range: Range<usize>,
    ) -> impl Iterator<Item = Substitution> + 'a {
        let key = pattern.key();
        let mut best: Option<&Vec<usize>> = self.by_pred.get(&key);
        for (i, arg) in pattern.args.iter().enumerate() {
            if let Some(p) = principal(arg) {
                match self.by_arg.get(&(key.clone(), i, p)) {
                    Some(list) if best.is_none_or(|b| list.len() < b.len()) => best = Some(list),
                    Some(_) => {}
                    None => best = None,
                }
                if best.is_none() {
                    break;
                }
            }
        }
        let ids: &[usize] = best.map(|v| v.as_slice()).unwrap_or(&[]);
        let lo = ids.partition_point(|&i| i < range.start);
        let hi = ids.partition_point(|&i| i < range.end);
        ids[lo..hi].iter().filter_map(move |&i| {
            let mut s2 = s.clone();
            let fact = &self.facts[i];
            let ok = pattern.args.iter().zip(&fact.args).all(|(a, b)| s2.unify(a, b));
            ok.then_some(s2)
        })
    }

    /// Whether any fact unifies with the pattern.
    pub fn any_match(&self, pattern: &Atom) -> bool {
        let s = Substitution::new();
        let found = self.matches(pattern, &s, 0..self.facts.len()).next().is_some();
        found
    }

    /// All facts in standard order.
    pub fn sorted(&self) -> Vec<&Atom> {
        let mut v: Vec<&Atom> = self.facts.iter().collect();
        v.sort();
        v
    }

    /// One re-readable clause per line, sorted.
    pub fn dump_text(&self) -> String {
        self.sorted().into_iter().map(|a| format!("{}.\n", print_atom(a))).collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct JsonFact {
            pred: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            module: Option<String>,
            args: Vec<String>,
        }
        let facts: Vec<JsonFact> = self
            .sorted()
            .into_iter()
            .map(|a| JsonFact {
                pred: a.predicate.clone(),
                module: a.module.clone(),
                args: a.args.iter().map(print_term).collect(),
            })
            .collect();
        serde_json::to_value(facts).expect("facts serialize")
    }
}

impl FromIterator<Atom> for FactStore {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut s = FactStore::new();
        for a in iter {
            s.insert(a);
        }
        s
    }
}
