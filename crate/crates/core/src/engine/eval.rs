use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use super::builtins::call_builtin;
use super::safety::{check_safety, literal_kind, literal_plan_item, plan_order, LitKind, PlanItem};
use super::store::FactStore;
use super::strata::stratify;
use super::EngineError;
use crate::kernel::{Atom, PredKey, Program, Rule, Substitute, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    SemiNaive,
    Naive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    pub strategy: Strategy,
    /// Per stratum.
    pub max_iterations: usize,
    pub max_facts: usize,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_MAX_FACTS: usize = 1_000_000;

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { strategy: Strategy::SemiNaive, max_iterations: DEFAULT_MAX_ITERATIONS, max_facts: DEFAULT_MAX_FACTS }
    }
}

/// A rule with its body in evaluation order.
#[derive(Debug, Clone)]
pub(crate) struct CompiledRule<'a> {
    pub rule: &'a Rule,
    /// Body indices in evaluation order, with their kinds.
    pub steps: Vec<(usize, LitKind)>,
}

impl<'a> CompiledRule<'a> {
    pub fn new(rule: &'a Rule, idb: &BTreeSet<PredKey>) -> Self {
        let kinds: Vec<LitKind> = rule.body.iter().map(|l| literal_kind(l, idb)).collect();
        let items: Vec<PlanItem> = rule.body.iter().zip(&kinds).map(|(l, k)| literal_plan_item(l, *k)).collect();
        let (order, _) = plan_order(&items, &BTreeSet::new());
        CompiledRule { rule, steps: order.into_iter().map(|i| (i, kinds[i])).collect() }
    }

    /// Plan positions of positive literals.
    fn positive_steps(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().enumerate().filter(|(_, (_, k))| *k == LitKind::Positive).map(|(p, _)| p)
    }

    /// Enumerates body solutions. `ranges[p]` restricts the facts the
    /// positive literal at plan position `p` may match.
    pub fn solve(
        &self,
        store: &FactStore,
        ranges: &[Range<usize>],
        pos: usize,
        s: Substitution,
        out: &mut dyn FnMut(Substitution) -> Result<(), EngineError>,
    ) -> Result<(), EngineError> {
        let Some(&(i, kind)) = self.steps.get(pos) else {
            return out(s);
        };
        let lit = &self.rule.body[i];
        match kind {
            LitKind::Positive => {
                let pattern = lit.atom.apply(&s);
                for s2 in store.matches(&pattern, &s, ranges[pos].clone()) {
                    self.solve(store, ranges, pos + 1, s2, out)?;
                }
            }
            LitKind::Negated => {
                if !store.any_match(&lit.atom.apply(&s)) {
                    self.solve(store, ranges, pos + 1, s, out)?;
                }
            }
            LitKind::Builtin => {
                let answers = call_builtin(&lit.atom, &s)
                    .map_err(|source| EngineError::Builtin { location: self.rule.location(), source })?;
                for s2 in answers {
                    self.solve(store, ranges, pos + 1, s2, out)?;
                }
            }
        }
        Ok(())
    }

    /// Grounds the head for every body solution and hands over new atoms.
    fn fire(
        &self,
        store: &FactStore,
        ranges: &[Range<usize>],
        fresh: &mut Vec<Atom>,
        seen: &mut HashSet<Atom>,
    ) -> Result<(), EngineError> {
        let rule = self.rule;
        self.solve(store, ranges, 0, Substitution::new(), &mut |s| {
            let head = rule.head.apply(&s);
            if !head.is_ground() {
                return Err(EngineError::NonGroundHead { location: rule.location(), atom: head.to_string() });
            }
            if !store.contains(&head) && seen.insert(head.clone()) {
                fresh.push(head);
            }
            Ok(())
        })
    }
}

/// One application of the immediate-consequence operator: every rule is
/// evaluated against the whole store and atoms not yet in it are returned
/// in derivation order.
pub fn tp_step(p: &Program, store: &FactStore) -> Result<Vec<Atom>, EngineError> {
    let idb = p.idb();
    let mut fresh = Vec::new();
    let mut seen = HashSet::new();
    for rule in &p.rules {
        let c = CompiledRule::new(rule, &idb);
        let ranges = vec![0..store.len(); c.steps.len()];
        c.fire(store, &ranges, &mut fresh, &mut seen)?;
    }
    Ok(fresh)
}

fn limit_error(stratum: usize, reason: String, iterations: usize, store: &FactStore, recent: &[Atom]) -> EngineError {
    EngineError::ResourceLimitExceeded {
        stratum,
        reason,
        iterations,
        facts: store.len(),
        sample: recent.iter().take(5).map(|a| a.to_string()).collect(),
    }
}

fn insert_all(
    store: &mut FactStore,
    fresh: Vec<Atom>,
    opts: &EvalOptions,
    stratum: usize,
    iterations: usize,
) -> Result<Range<usize>, EngineError> {
    let lo = store.len();
    for (n, atom) in fresh.iter().enumerate() {
        if store.len() >= opts.max_facts {
            return Err(limit_error(
                stratum,
                format!("more than {} facts", opts.max_facts),
                iterations,
                store,
                &fresh[n..],
            ));
        }
        store.insert(atom.clone());
    }
    let hi = store.len();
    store.set_delta(lo..hi);
    Ok(lo..hi)
}

/// Runs the fixpoint of `p` stratum by stratum on top of `store`.
pub fn evaluate_into(p: &Program, mut store: FactStore, opts: &EvalOptions) -> Result<FactStore, EngineError> {
    let violations = check_safety(p);
    if !violations.is_empty() {
        return Err(EngineError::Safety(violations));
    }
    let strata = stratify(p)?;
    let idb = p.idb();
    let compiled: Vec<CompiledRule> = p.rules.iter().map(|r| CompiledRule::new(r, &idb)).collect();
    for stratum in 0..strata.count().max(1) {
        let preds = strata.preds_in(stratum);
        let rules: Vec<&CompiledRule> =
            compiled.iter().filter(|c| strata.stratum(&c.rule.head.key()) == stratum).collect();
        if rules.is_empty() {
            continue;
        }
        let mut iterations = 0;
        let mut delta = store.len()..store.len();
        loop {
            if iterations == opts.max_iterations {
                let recent: Vec<Atom> = store.delta().to_vec();
                return Err(limit_error(
                    stratum,
                    format!("more than {} iterations", opts.max_iterations),
                    iterations,
                    &store,
                    &recent,
                ));
            }
            iterations += 1;
            let mut fresh = Vec::new();
            let mut seen = HashSet::new();
            let full = 0..store.len();
            if iterations == 1 || opts.strategy == Strategy::Naive {
                for c in &rules {
                    let ranges = vec![full.clone(); c.steps.len()];
                    c.fire(&store, &ranges, &mut fresh, &mut seen)?;
                }
            } else {
                for c in &rules {
                    for d in c.positive_steps() {
                        let key = c.rule.body[c.steps[d].0].atom.key();
                        if !preds.contains(&key) {
                            continue;
                        }
                        let ranges: Vec<Range<usize>> = (0..c.steps.len())
                            .map(|q| match q.cmp(&d) {
                                std::cmp::Ordering::Less => 0..delta.start,
                                std::cmp::Ordering::Equal => delta.clone(),
                                std::cmp::Ordering::Greater => full.clone(),
                            })
                            .collect();
                        c.fire(&store, &ranges, &mut fresh, &mut seen)?;
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            delta = insert_all(&mut store, fresh, opts, stratum, iterations)?;
        }
    }
    Ok(store)
}

pub fn evaluate(p: &Program, opts: &EvalOptions) -> Result<FactStore, EngineError> {
    evaluate_into(p, FactStore::new(), opts)
}
