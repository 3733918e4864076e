use super::{DepGraph, GraphKind, Mark, Node};
use crate::xml::XmlTerm;

/// One node per distinct tag, one edge per parent/child tag pair. With
/// `include_attrs`, attribute names hang below their element as `@name`.
pub fn schema_graph(x: &XmlTerm, include_attrs: bool) -> DepGraph {
    let mut g = DepGraph::new(GraphKind::Schema);
    walk(x, include_attrs, &mut g);
    g
}

fn walk(x: &XmlTerm, include_attrs: bool, g: &mut DepGraph) {
    let me = Node::Tag(x.tag.clone());
    g.nodes.insert(me.clone());
    if include_attrs {
        for (k, _) in &x.attributes {
            g.add_edge(me.clone(), Node::Tag(format!("@{k}")), Mark::Plain);
        }
    }
    for child in x.elements() {
        g.add_edge(me.clone(), Node::Tag(child.tag.clone()), Mark::Plain);
        walk(child, include_attrs, g);
    }
}
