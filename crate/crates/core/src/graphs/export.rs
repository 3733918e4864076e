use serde::Serialize;

use super::{DepGraph, Mark, Node};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node_type(n: &Node) -> &'static str {
    match n {
        Node::Pred(_) => "pred",
        Node::Rule(_) => "rule",
        Node::MetaCall { .. } => "meta",
        Node::Tag(_) => "tag",
    }
}

fn label(n: &Node) -> String {
    match n {
        Node::MetaCall { pred, .. } => pred.to_string(),
        other => other.id(),
    }
}

/// Graphviz output with nodes and edges in lexicographic order of their ids.
pub fn to_dot(g: &DepGraph) -> String {
    let mut nodes: Vec<&Node> = g.nodes.iter().collect();
    nodes.sort_by_key(|n| n.id());
    let mut out = String::from("digraph G {\n");
    for n in nodes {
        let shape = match n {
            Node::Pred(_) | Node::Tag(_) => "ellipse",
            Node::Rule(_) => "box",
            Node::MetaCall { .. } => "plaintext",
        };
        out.push_str(&format!("  {} [shape={shape}, label={}];\n", quote(&n.id()), quote(&label(n))));
    }
    let mut edges: Vec<(String, String, Mark)> = g.edges.iter().map(|e| (e.from.id(), e.to.id(), e.mark)).collect();
    edges.sort();
    for (from, to, mark) in edges {
        out.push_str(&format!("  {} -> {}", quote(&from), quote(&to)));
        if mark == Mark::Not {
            out.push_str(" [label=\"not\"]");
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonNode {
    id: String,
    #[serde(rename = "type")]
    node_type: &'static str,
    label: String,
}

#[derive(Serialize)]
struct JsonEdge {
    from: String,
    to: String,
    mark: &'static str,
}

#[derive(Serialize)]
struct JsonGraph {
    kind: String,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

pub fn to_json_value(g: &DepGraph) -> serde_json::Value {
    let mut nodes: Vec<JsonNode> =
        g.nodes.iter().map(|n| JsonNode { id: n.id(), node_type: node_type(n), label: label(n) }).collect();
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    let mut edges: Vec<JsonEdge> = g
        .edges
        .iter()
        .map(|e| JsonEdge {
            from: e.from.id(),
            to: e.to.id(),
            mark: if e.mark == Mark::Not { "not" } else { "plain" },
        })
        .collect();
    edges.sort_by(|a, b| (&a.from, &a.to, a.mark).cmp(&(&b.from, &b.to, b.mark)));
    serde_json::to_value(JsonGraph { kind: g.kind.to_string(), nodes, edges }).expect("graph serializes")
}

/// JSON dump `{kind, nodes: [{id, type, label}], edges: [{from, to, mark}]}`.
pub fn to_json(g: &DepGraph) -> String {
    serde_json::to_string_pretty(&to_json_value(g)).expect("graph serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_pdg, DepGraph, GraphKind};
    use crate::syntax::parse_program;

    #[test]
    fn p1_dot() {
        let dot = to_dot(&build_pdg(&parse_program("p :- q1.\np :- q2.").unwrap()));
        assert!(dot.contains("\"p/0\" -> \"q1/0\";"));
        assert!(dot.contains("\"p/0\" -> \"q2/0\";"));
    }

    #[test]
    fn empty_and_negated() {
        assert_eq!(to_dot(&DepGraph::new(GraphKind::Pdg)), "digraph G {\n}\n");
        let dot = to_dot(&build_pdg(&parse_program("a :- not b.").unwrap()));
        assert!(dot.contains("\"a/0\" -> \"b/0\" [label=\"not\"];"));
    }

    #[test]
    fn json_shape() {
        let v = to_json_value(&build_pdg(&parse_program("a :- not b.").unwrap()));
        assert_eq!(v["kind"], "pdg");
        assert_eq!(v["edges"][0]["mark"], "not");
        assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
    }
}
