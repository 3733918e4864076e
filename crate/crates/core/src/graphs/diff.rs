use std::collections::{BTreeMap, BTreeSet};

use super::{DepGraph, Edge, GraphError, GraphKind, Mark, Node};
use crate::kernel::PredKey;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub nodes_only_left: BTreeSet<Node>,
    pub nodes_only_right: BTreeSet<Node>,
    pub edges_only_left: BTreeSet<Edge>,
    pub edges_only_right: BTreeSet<Edge>,
    /// Helper predicates factored out when the two sides were compared
    /// modulo helpers.
    pub equivalent_modulo: BTreeSet<PredKey>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.nodes_only_left.is_empty()
            && self.nodes_only_right.is_empty()
            && self.edges_only_left.is_empty()
            && self.edges_only_right.is_empty()
    }

    pub fn swapped(&self) -> DiffReport {
        DiffReport {
            nodes_only_left: self.nodes_only_right.clone(),
            nodes_only_right: self.nodes_only_left.clone(),
            edges_only_left: self.edges_only_right.clone(),
            edges_only_right: self.edges_only_left.clone(),
            equivalent_modulo: self.equivalent_modulo.clone(),
        }
    }
}

/// Splits a name into a text prefix and a trailing number, so `r2` sorts
/// before `r10`.
fn natural_key(name: &str) -> (String, u64, String) {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (prefix, number) = name.split_at(name.len() - digits);
    (prefix.to_string(), number.parse().unwrap_or(0), name.to_string())
}

fn target_shape(g: &DepGraph, node: &Node) -> String {
    match node {
        Node::MetaCall { pred, .. } => {
            let inner: BTreeSet<String> = g
                .successors(node)
                .map(|e| format!("{}{}", e.to.id(), if e.mark == Mark::Not { "~" } else { "" }))
                .collect();
            format!("{pred}[{}]", inner.into_iter().collect::<Vec<_>>().join(","))
        }
        other => other.id(),
    }
}

/// Renames rule nodes to `r1, r2, ...` ordered by head predicate and body
/// shape, and meta-call sites likewise, so that reordering clauses does not
/// change the graph.
/// Sort key of a rule node: head ids, body shapes, then source position.
type RuleKey<'a> = (Vec<String>, Vec<(String, Mark)>, (String, u64, String), &'a Node);

fn canonical(g: &DepGraph) -> DepGraph {
    if g.kind != GraphKind::Rpg {
        return g.clone();
    }
    let mut heads: BTreeMap<&Node, BTreeSet<String>> = BTreeMap::new();
    for e in &g.edges {
        if e.from.is_pred() && matches!(e.to, Node::Rule(_)) {
            heads.entry(&e.to).or_default().insert(e.from.id());
        }
    }
    let mut rules: Vec<RuleKey> = g
        .nodes
        .iter()
        .filter_map(|n| match n {
            Node::Rule(name) => {
                let mut body: Vec<(String, Mark)> = g.successors(n).map(|e| (target_shape(g, &e.to), e.mark)).collect();
                body.sort();
                let head = heads.get(n).map(|h| h.iter().cloned().collect()).unwrap_or_default();
                Some((head, body, natural_key(name), n))
            }
            _ => None,
        })
        .collect();
    rules.sort();
    let mut rename: BTreeMap<Node, Node> = BTreeMap::new();
    for (i, (.., node)) in rules.iter().enumerate() {
        rename.insert((*node).clone(), Node::Rule(format!("r{}", i + 1)));
    }
    let mut metas: Vec<(String, u64, String, &Node)> = Vec::new();
    for e in &g.edges {
        if let (Node::Rule(_), Node::MetaCall { .. }) = (&e.from, &e.to) {
            let owner = rename[&e.from].id();
            let (prefix, number, _) = natural_key(&owner);
            metas.push((prefix, number, target_shape(g, &e.to), &e.to));
        }
    }
    metas.sort();
    for (i, (.., node)) in metas.iter().enumerate() {
        if let Node::MetaCall { pred, .. } = node {
            rename.entry((*node).clone()).or_insert(Node::MetaCall { pred: pred.clone(), call_site: i + 1 });
        }
    }
    let map = |n: &Node| rename.get(n).cloned().unwrap_or_else(|| n.clone());
    DepGraph {
        kind: g.kind,
        nodes: g.nodes.iter().map(map).collect(),
        edges: g.edges.iter().map(|e| Edge { from: map(&e.from), to: map(&e.to), mark: e.mark }).collect(),
    }
}

pub fn graph_diff(g1: &DepGraph, g2: &DepGraph) -> Result<DiffReport, GraphError> {
    if g1.kind != g2.kind {
        return Err(GraphError::KindMismatch(g1.kind, g2.kind));
    }
    let (a, b) = (canonical(g1), canonical(g2));
    Ok(DiffReport {
        nodes_only_left: a.nodes.difference(&b.nodes).cloned().collect(),
        nodes_only_right: b.nodes.difference(&a.nodes).cloned().collect(),
        edges_only_left: a.edges.difference(&b.edges).cloned().collect(),
        edges_only_right: b.edges.difference(&a.edges).cloned().collect(),
        equivalent_modulo: BTreeSet::new(),
    })
}
