//! Predicate dependency graphs, rule predicate graphs and XML schema graphs.

mod diff;
mod export;
mod schema;
mod unfold;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::kernel::{Literal, PredKey, Program, Term};
use crate::syntax::atom_from_term;

pub use diff::{graph_diff, DiffReport};
pub use export::{to_dot, to_json, to_json_value};
pub use schema::schema_graph;
pub use unfold::{equivalent_modulo_helpers, unfold_helper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphKind {
    Pdg,
    Rpg,
    Schema,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Pdg => "pdg",
            GraphKind::Rpg => "rpg",
            GraphKind::Schema => "schema",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Pred(PredKey),
    Rule(String),
    /// One node per call of a meta-predicate; `call_site` numbers the calls
    /// of the whole program in source order, starting at 1.
    MetaCall { pred: PredKey, call_site: usize },
    Tag(String),
}

impl Node {
    pub fn pred(name: &str, arity: usize) -> Node {
        Node::Pred(PredKey::new(name, arity))
    }

    pub fn rule(name: &str) -> Node {
        Node::Rule(name.to_string())
    }

    /// Unique textual id, used in DOT and JSON output.
    pub fn id(&self) -> String {
        match self {
            Node::Pred(k) => k.to_string(),
            Node::Rule(r) => r.clone(),
            Node::MetaCall { pred, call_site } => format!("{pred}#{call_site}"),
            Node::Tag(t) => t.clone(),
        }
    }

    pub fn is_pred(&self) -> bool {
        matches!(self, Node::Pred(_))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Plain,
    Not,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Plain => "plain",
            Mark::Not => "not",
        })
    }
}

impl Mark {
    fn or(self, other: Mark) -> Mark {
        if self == Mark::Not || other == Mark::Not {
            Mark::Not
        } else {
            Mark::Plain
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: Node,
    pub to: Node,
    pub mark: Mark,
}

impl Edge {
    pub fn new(from: Node, to: Node, mark: Mark) -> Self {
        Edge { from, to, mark }
    }

    pub fn plain(from: Node, to: Node) -> Self {
        Edge { from, to, mark: Mark::Plain }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)?;
        if self.mark == Mark::Not {
            f.write_str(" [not]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepGraph {
    pub kind: GraphKind,
    pub nodes: BTreeSet<Node>,
    pub edges: BTreeSet<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("expected a {expected} graph, got {found}")]
    WrongKind { expected: GraphKind, found: GraphKind },
    #[error("cannot compare a {0} graph with a {1} graph")]
    KindMismatch(GraphKind, GraphKind),
    #[error("node {0} not found")]
    NodeNotFound(String),
    #[error("body literal {index} of {rule} does not unify with the head of {helper}")]
    NotUnifiable { rule: String, helper: String, index: usize },
    #[error("body literal {index} of {rule} is negated and cannot be unfolded")]
    NegatedLiteral { rule: String, index: usize },
    #[error("body literal {index} of {rule} is a builtin call and cannot be unfolded")]
    BuiltinLiteral { rule: String, index: usize },
    #[error("rule {rule} has no body literal {index}")]
    IndexOutOfRange { rule: String, index: usize },
}

impl DepGraph {
    pub fn new(kind: GraphKind) -> Self {
        DepGraph { kind, nodes: BTreeSet::new(), edges: BTreeSet::new() }
    }

    pub fn add_edge(&mut self, from: Node, to: Node, mark: Mark) {
        self.nodes.insert(from.clone());
        self.nodes.insert(to.clone());
        self.edges.insert(Edge { from, to, mark });
    }

    pub fn successors<'a>(&'a self, node: &'a Node) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.range(edge_lower_bound(node)..).take_while(move |e| &e.from == node)
    }

    pub fn pred_nodes(&self) -> impl Iterator<Item = &PredKey> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Pred(k) => Some(k),
            _ => None,
        })
    }

    fn require(&self, node: &Node) -> Result<(), GraphError> {
        if self.nodes.contains(node) {
            Ok(())
        } else {
            Err(GraphError::NodeNotFound(node.id()))
        }
    }
}

/// Smallest edge leaving `node` in the edge ordering.
fn edge_lower_bound(node: &Node) -> Edge {
    Edge { from: node.clone(), to: Node::Pred(PredKey { module: None, name: String::new(), arity: 0 }), mark: Mark::Plain }
}

/// Which predicates are treated as meta-predicates, and which of their
/// arguments hold goals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaConfig {
    pub metas: BTreeSet<PredKey>,
}

impl Default for MetaConfig {
    fn default() -> Self {
        MetaConfig { metas: [PredKey::new("not", 1), PredKey::new("findall", 3)].into_iter().collect() }
    }
}

impl MetaConfig {
    pub fn none() -> Self {
        MetaConfig { metas: BTreeSet::new() }
    }

    /// Parses a comma-separated list such as `not/1,findall/3`.
    pub fn parse(list: &str) -> Option<Self> {
        let metas = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(PredKey::parse)
            .collect::<Option<BTreeSet<_>>>()?;
        Some(MetaConfig { metas })
    }

    fn negation_is_meta(&self) -> bool {
        self.metas.contains(&PredKey::new("not", 1))
    }

    /// Argument positions holding goals.
    fn goal_positions(key: &PredKey) -> Vec<usize> {
        match (key.name.as_str(), key.arity) {
            ("findall", 3) | ("bagof", 3) | ("setof", 3) => vec![1],
            (_, n) => (0..n).collect(),
        }
    }
}

/// What a body literal points at once meta-predicate calls are opened up.
enum Target {
    Pred(PredKey, Mark),
    Meta { pred: PredKey, inner: Vec<(PredKey, Mark)> },
}

fn is_control(key: &PredKey) -> bool {
    key.module.is_none() && key.arity == 0 && matches!(key.name.as_str(), "!" | "true" | "fail")
}

/// Predicates called inside a goal argument, through `,`, `;`, `->` and
/// negation.
fn goal_preds(term: &Term, mark: Mark, out: &mut Vec<(PredKey, Mark)>) {
    match term {
        Term::Var(_) | Term::Num(_) => {}
        Term::Compound(f, args) if matches!(f.as_str(), "," | ";" | "->") && args.len() == 2 => {
            goal_preds(&args[0], mark, out);
            goal_preds(&args[1], mark, out);
        }
        Term::Compound(f, args) if (f == "not" || f == "\\+") && args.len() == 1 => {
            goal_preds(&args[0], Mark::Not, out);
        }
        _ => {
            if let Ok(atom) = atom_from_term(term) {
                let key = atom.key();
                if !is_control(&key) && !out.contains(&(key.clone(), mark)) {
                    out.push((key, mark));
                }
            }
        }
    }
}

fn literal_target(lit: &Literal, metas: &MetaConfig) -> Option<Target> {
    let key = lit.atom.key();
    if is_control(&key) {
        return None;
    }
    if lit.is_negated() {
        return Some(if metas.negation_is_meta() {
            Target::Meta { pred: PredKey::new("not", 1), inner: vec![(key, Mark::Not)] }
        } else {
            Target::Pred(key, Mark::Not)
        });
    }
    if metas.metas.contains(&key) {
        let mut inner = Vec::new();
        for i in MetaConfig::goal_positions(&key) {
            goal_preds(&lit.atom.args[i], Mark::Plain, &mut inner);
        }
        return Some(Target::Meta { pred: key, inner });
    }
    Some(Target::Pred(key, Mark::Plain))
}

pub fn build_pdg(p: &Program) -> DepGraph {
    build_pdg_with(p, &MetaConfig::default())
}

pub fn build_pdg_with(p: &Program, metas: &MetaConfig) -> DepGraph {
    let mut g = DepGraph::new(GraphKind::Pdg);
    for rule in &p.rules {
        let head = Node::Pred(rule.head.key());
        g.nodes.insert(head.clone());
        for lit in &rule.body {
            match literal_target(lit, metas) {
                None => {}
                Some(Target::Pred(k, m)) => g.add_edge(head.clone(), Node::Pred(k), m),
                Some(Target::Meta { inner, .. }) => {
                    for (k, m) in inner {
                        g.add_edge(head.clone(), Node::Pred(k), m);
                    }
                }
            }
        }
    }
    g
}

pub fn build_rpg(p: &Program) -> DepGraph {
    build_rpg_with(p, &MetaConfig::default())
}

pub fn build_rpg_with(p: &Program, metas: &MetaConfig) -> DepGraph {
    let mut g = DepGraph::new(GraphKind::Rpg);
    let mut call_site = 0;
    for rule in &p.rules {
        let r = Node::Rule(rule.name.clone());
        g.add_edge(Node::Pred(rule.head.key()), r.clone(), Mark::Plain);
        for lit in &rule.body {
            match literal_target(lit, metas) {
                None => {}
                Some(Target::Pred(k, m)) => g.add_edge(r.clone(), Node::Pred(k), m),
                Some(Target::Meta { pred, inner }) => {
                    call_site += 1;
                    let meta = Node::MetaCall { pred, call_site };
                    g.add_edge(r.clone(), meta.clone(), Mark::Plain);
                    for (k, m) in inner {
                        g.add_edge(meta.clone(), Node::Pred(k), m);
                    }
                }
            }
        }
    }
    g
}

/// Contracts rule and meta-call nodes: every path from a predicate through
/// non-predicate nodes to a predicate becomes one edge, marked `not` when
/// any edge on the path is.
pub fn pdg_from_rpg(g: &DepGraph) -> Result<DepGraph, GraphError> {
    if g.kind != GraphKind::Rpg {
        return Err(GraphError::WrongKind { expected: GraphKind::Rpg, found: g.kind });
    }
    let mut out = DepGraph::new(GraphKind::Pdg);
    for node in g.nodes.iter().filter(|n| n.is_pred()) {
        out.nodes.insert(node.clone());
        let mut stack: Vec<(&Node, Mark)> = vec![(node, Mark::Plain)];
        let mut seen: BTreeSet<(&Node, Mark)> = BTreeSet::new();
        while let Some((cur, mark)) = stack.pop() {
            for e in g.successors(cur) {
                let m = mark.or(e.mark);
                if e.to.is_pred() {
                    out.add_edge(node.clone(), e.to.clone(), m);
                } else if seen.insert((&e.to, m)) {
                    stack.push((&e.to, m));
                }
            }
        }
    }
    Ok(out)
}

/// Nodes strictly reachable from `from` (the start node is excluded even
/// when it lies on a cycle; see [`on_cycle`]). On a rule predicate graph
/// only predicate nodes are reported.
pub fn reachable(g: &DepGraph, from: &Node) -> Result<BTreeSet<Node>, GraphError> {
    g.require(from)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([from]);
    while let Some(cur) = queue.pop_front() {
        for e in g.successors(cur) {
            if seen.insert(&e.to) {
                queue.push_back(&e.to);
            }
        }
    }
    Ok(seen
        .into_iter()
        .filter(|n| *n != from && (g.kind != GraphKind::Rpg || n.is_pred()))
        .cloned()
        .collect())
}

/// Whether `node` can reach itself.
pub fn on_cycle(g: &DepGraph, node: &Node) -> Result<bool, GraphError> {
    g.require(node)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([node]);
    while let Some(cur) = queue.pop_front() {
        for e in g.successors(cur) {
            if &e.to == node {
                return Ok(true);
            }
            if seen.insert(&e.to) {
                queue.push_back(&e.to);
            }
        }
    }
    Ok(false)
}

/// Predicate-level adjacency, used by stratification.
pub fn pred_adjacency(g: &DepGraph) -> BTreeMap<&PredKey, Vec<(&PredKey, Mark)>> {
    let mut adj: BTreeMap<&PredKey, Vec<(&PredKey, Mark)>> = BTreeMap::new();
    for k in g.pred_nodes() {
        adj.entry(k).or_default();
    }
    for e in &g.edges {
        if let (Node::Pred(a), Node::Pred(b)) = (&e.from, &e.to) {
            adj.entry(a).or_default().push((b, e.mark));
        }
    }
    adj
}
