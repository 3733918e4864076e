use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::graphs::{build_pdg, pred_adjacency, Mark};
use crate::kernel::{PredKey, Program, BUILTIN_MODULE};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Strata {
    pub assignment: BTreeMap<PredKey, usize>,
}

impl Strata {
    pub fn stratum(&self, key: &PredKey) -> usize {
        self.assignment.get(key).copied().unwrap_or(0)
    }

    pub fn count(&self) -> usize {
        self.assignment.values().max().map_or(0, |m| m + 1)
    }

    pub fn preds_in(&self, stratum: usize) -> BTreeSet<&PredKey> {
        self.assignment.iter().filter(|(_, &s)| s == stratum).map(|(k, _)| k).collect()
    }
}

/// A cycle through negation, as a closed predicate sequence.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct CycleError {
    pub cycle: Vec<PredKey>,
}

impl fmt::Display for CycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.cycle.iter().map(|k| k.to_string()).collect();
        write!(f, "negation on a dependency cycle: {}", path.join(" -> "))
    }
}

/// Minimal stratification: a predicate sits one stratum above the highest
/// predicate it depends on negatively and no lower than any it depends on
/// positively.
pub fn stratify(p: &Program) -> Result<Strata, CycleError> {
    let pdg = build_pdg(p);
    let adj = pred_adjacency(&pdg);
    let mut g: DiGraph<&PredKey, Mark> = DiGraph::new();
    let mut index: HashMap<&PredKey, NodeIndex> = HashMap::new();
    for &k in adj.keys() {
        index.insert(k, g.add_node(k));
    }
    for (&from, outs) in &adj {
        for &(to, mark) in outs {
            g.add_edge(index[from], index[to], mark);
        }
    }
    // Tarjan yields components with dependencies before dependents.
    let sccs = tarjan_scc(&g);
    let mut comp_of = vec![0; g.node_count()];
    for (c, members) in sccs.iter().enumerate() {
        for n in members {
            comp_of[n.index()] = c;
        }
    }
    for (&from, outs) in &adj {
        for &(to, mark) in outs {
            if mark == Mark::Not && comp_of[index[from].index()] == comp_of[index[to].index()] {
                return Err(CycleError { cycle: negative_cycle(&adj, from, to, &comp_of, &index) });
            }
        }
    }
    let mut level = vec![0usize; sccs.len()];
    for (c, members) in sccs.iter().enumerate() {
        let mut l = 0;
        for n in members {
            for e in g.edges(*n) {
                use petgraph::visit::EdgeRef;
                let dep = comp_of[e.target().index()];
                if dep != c {
                    l = l.max(level[dep] + usize::from(*e.weight() == Mark::Not));
                }
            }
        }
        level[c] = l;
    }
    let assignment = adj
        .keys()
        .filter(|k| k.module.as_deref() != Some(BUILTIN_MODULE))
        .map(|&k| (k.clone(), level[comp_of[index[k].index()]]))
        .collect();
    Ok(Strata { assignment })
}

/// Shortest path from `to` back to `from` inside their component, closed
/// into a cycle starting at `from`.
fn negative_cycle(
    adj: &BTreeMap<&PredKey, Vec<(&PredKey, Mark)>>,
    from: &PredKey,
    to: &PredKey,
    comp_of: &[usize],
    index: &HashMap<&PredKey, NodeIndex>,
) -> Vec<PredKey> {
    let comp = comp_of[index[from].index()];
    let mut prev: BTreeMap<&PredKey, &PredKey> = BTreeMap::new();
    let mut queue = VecDeque::from([to]);
    let mut seen: BTreeSet<&PredKey> = BTreeSet::from([to]);
    while let Some(cur) = queue.pop_front() {
        if cur == from {
            break;
        }
        for &(next, _) in &adj[cur] {
            if comp_of[index[next].index()] == comp && seen.insert(next) {
                prev.insert(next, cur);
                queue.push_back(next);
            }
        }
    }
    let mut back = vec![from.clone()];
    let mut cur = from;
    while cur != to {
        cur = prev[cur];
        back.push(cur.clone());
    }
    back.push(from.clone());
    let mut cycle = vec![from.clone()];
    cycle.extend(back.into_iter().rev().skip(1));
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn k(n: &str) -> PredKey {
        PredKey::new(n, 0)
    }

    #[test]
    fn minimal_strata() {
        let s = stratify(&parse_program("a :- not b.\nb :- c.").unwrap()).unwrap();
        assert_eq!(s.stratum(&k("a")), 1);
        assert_eq!(s.stratum(&k("b")), 0);
        assert_eq!(s.stratum(&k("c")), 0);
        assert_eq!(s.count(), 2);
    }

    #[test]
    fn positive_programs_are_one_stratum() {
        let s = stratify(&parse_program("a :- b.\nb :- a, c.\nc :- d.").unwrap()).unwrap();
        assert!(s.assignment.values().all(|&v| v == 0));
    }

    #[test]
    fn chains_of_negation() {
        let s = stratify(&parse_program("a :- not b.\nb :- not c.\nc :- d.\ne :- a, c.").unwrap()).unwrap();
        assert_eq!(s.stratum(&k("a")), 2);
        assert_eq!(s.stratum(&k("b")), 1);
        assert_eq!(s.stratum(&k("e")), 2);
    }

    #[test]
    fn negative_cycle_is_reported() {
        let e = stratify(&parse_program("a :- not b.\nb :- not a.").unwrap()).unwrap_err();
        assert_eq!(e.cycle, vec![k("a"), k("b"), k("a")]);
        let e = stratify(&parse_program("p :- q.\nq :- r.\nr :- not p.").unwrap()).unwrap_err();
        assert_eq!(e.cycle.first(), e.cycle.last());
        assert_eq!(e.cycle.len(), 4);
        assert!(e.to_string().contains("->"));
    }

    #[test]
    fn builtins_are_not_assigned() {
        let s = stratify(&parse_program("p(X) :- q(X), prolog:(X > 1).").unwrap()).unwrap();
        assert!(s.assignment.keys().all(|k| k.module.is_none()));
    }
}
