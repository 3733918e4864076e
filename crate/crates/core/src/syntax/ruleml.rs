//! The RuleML/SWRL XML subset: `swrlx:Ontology` documents holding
//! `ruleml:imp` rules and top-level class or property atoms.

use super::swrl::{data_literal, SwrlAtom, SwrlObj, SwrlOntology, SwrlRule};
use crate::kernel::Term;
use crate::xml::{self, XmlNode, XmlSyntaxError, XmlTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RulemlError {
    #[error(transparent)]
    Xml(#[from] XmlSyntaxError),
    #[error("unsupported construct <{construct}> at {line}:{column}")]
    UnsupportedConstruct { construct: String, line: usize, column: usize },
    #[error("malformed <{construct}> at {line}:{column}: {message}")]
    Malformed { construct: String, line: usize, column: usize, message: String },
}

/// Walks the element tree in pre-order, in step with the position list.
struct Reader {
    positions: Vec<(usize, usize)>,
}

impl Reader {
    fn pos(&self, index: usize) -> (usize, usize) {
        self.positions.get(index).copied().unwrap_or((0, 0))
    }

    fn unsupported(&self, e: &XmlTerm, index: usize) -> RulemlError {
        let (line, column) = self.pos(index);
        RulemlError::UnsupportedConstruct { construct: e.tag.clone(), line, column }
    }

    fn malformed(&self, e: &XmlTerm, index: usize, message: &str) -> RulemlError {
        let (line, column) = self.pos(index);
        RulemlError::Malformed { construct: e.tag.clone(), line, column, message: message.to_string() }
    }

    /// Element children paired with their pre-order indices.
    fn children<'a>(&self, e: &'a XmlTerm, index: usize) -> Vec<(&'a XmlTerm, usize)> {
        let mut next = index + 1;
        let mut out = Vec::new();
        for c in e.elements() {
            out.push((c, next));
            next += subtree_size(c);
        }
        out
    }

    fn ontology(&self, root: &XmlTerm) -> Result<SwrlOntology, RulemlError> {
        match root.tag.as_str() {
            "swrlx:Ontology" => {
                let name = root.attr("swrlx:name").unwrap_or("").to_string();
                if name.is_empty() {
                    return Err(self.malformed(root, 0, "missing swrlx:name"));
                }
                let mut onto = SwrlOntology { name, rules: Vec::new(), class_atoms: Vec::new() };
                for (c, i) in self.children(root, 0) {
                    if c.tag == "ruleml:imp" {
                        onto.rules.push(self.imp(c, i)?);
                    } else if is_atom_tag(&c.tag) {
                        onto.class_atoms.push(self.atom(c, i)?);
                    } else if is_declaration(&c.tag) {
                        continue;
                    } else {
                        return Err(self.unsupported(c, i));
                    }
                }
                Ok(onto)
            }
            "ruleml:imp" => Ok(SwrlOntology {
                name: "anonymous".into(),
                rules: vec![self.imp(root, 0)?],
                class_atoms: Vec::new(),
            }),
            _ => Err(self.unsupported(root, 0)),
        }
    }

    fn imp(&self, e: &XmlTerm, index: usize) -> Result<SwrlRule, RulemlError> {
        let mut rule = SwrlRule::default();
        for (c, i) in self.children(e, index) {
            match c.tag.as_str() {
                "ruleml:_rlab" => rule.annotations.push(c.text().trim().to_string()),
                "ruleml:_body" => {
                    for (a, j) in self.children(c, i) {
                        rule.antecedent.push(self.atom(a, j)?);
                    }
                }
                "ruleml:_head" => {
                    for (a, j) in self.children(c, i) {
                        rule.consequent.push(self.atom(a, j)?);
                    }
                }
                _ => return Err(self.unsupported(c, i)),
            }
        }
        Ok(rule)
    }

    fn atom(&self, e: &XmlTerm, index: usize) -> Result<SwrlAtom, RulemlError> {
        let kids = self.children(e, index);
        let objs = |from: usize| -> Result<Vec<SwrlObj>, RulemlError> {
            kids[from..].iter().map(|(c, i)| self.object(c, *i)).collect()
        };
        let pair = |objs: Vec<SwrlObj>| -> Result<(SwrlObj, SwrlObj), RulemlError> {
            let mut it = objs.into_iter();
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => Ok((a, b)),
                _ => Err(self.malformed(e, index, "expected two arguments")),
            }
        };
        match e.tag.as_str() {
            "swrlx:classAtom" => {
                let [(class, ci), (arg, ai)] = kids.as_slice() else {
                    return Err(self.malformed(e, index, "expected a class and one argument"));
                };
                Ok(SwrlAtom::Class { class: self.class_expr(class, *ci)?, arg: self.object(arg, *ai)? })
            }
            "swrlx:individualPropertyAtom" | "swrlx:datavaluedPropertyAtom" => {
                let property = e
                    .attr("swrlx:property")
                    .ok_or_else(|| self.malformed(e, index, "missing swrlx:property"))?;
                let (arg1, arg2) = pair(objs(0)?)?;
                Ok(SwrlAtom::Property { property: property.to_string(), arg1, arg2 })
            }
            "swrlx:sameIndividualAtom" => {
                let (a, b) = pair(objs(0)?)?;
                Ok(SwrlAtom::SameAs(a, b))
            }
            "swrlx:differentIndividualsAtom" => {
                let (a, b) = pair(objs(0)?)?;
                Ok(SwrlAtom::DifferentFrom(a, b))
            }
            "swrlx:builtinAtom" => {
                let name = e
                    .attr("swrlx:builtin")
                    .ok_or_else(|| self.malformed(e, index, "missing swrlx:builtin"))?;
                Ok(SwrlAtom::Builtin { name: name.to_string(), args: objs(0)? })
            }
            _ => Err(self.unsupported(e, index)),
        }
    }

    fn object(&self, e: &XmlTerm, index: usize) -> Result<SwrlObj, RulemlError> {
        match e.tag.as_str() {
            "ruleml:var" => Ok(SwrlObj::Variable(e.text().trim().to_string())),
            "ruleml:ind" => Ok(SwrlObj::Individual(e.text().trim().to_string())),
            "owlx:Individual" => e
                .attr("owlx:name")
                .map(|n| SwrlObj::Individual(n.to_string()))
                .ok_or_else(|| self.malformed(e, index, "missing owlx:name")),
            "owlx:DataValue" => Ok(SwrlObj::Data(data_literal(e.text().trim()))),
            _ => Err(self.unsupported(e, index)),
        }
    }

    /// Flattens a class expression to an opaque name such as
    /// `IntersectionOf(person,ObjectRestriction(parent,someValuesFrom(Physician)))`.
    fn class_expr(&self, e: &XmlTerm, index: usize) -> Result<String, RulemlError> {
        let nested = |label: &str| -> Result<String, RulemlError> {
            let parts = self
                .children(e, index)
                .into_iter()
                .map(|(c, i)| self.class_expr(c, i))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(format!("{label}({})", parts.join(",")))
        };
        let attr = |key: &str| {
            e.attr(key).map(str::to_string).ok_or_else(|| self.malformed(e, index, &format!("missing {key}")))
        };
        match e.tag.as_str() {
            "owlx:Class" => attr("owlx:name"),
            "owlx:IntersectionOf" => nested("IntersectionOf"),
            "owlx:UnionOf" => nested("UnionOf"),
            "owlx:ComplementOf" => nested("ComplementOf"),
            "owlx:ObjectRestriction" | "owlx:DataRestriction" => {
                let label = e.tag.trim_start_matches("owlx:");
                let property = attr("owlx:property")?;
                let parts = self
                    .children(e, index)
                    .into_iter()
                    .map(|(c, i)| self.class_expr(c, i))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(format!("{label}({property},{})", parts.join(",")))
            }
            "owlx:someValuesFrom" | "owlx:allValuesFrom" => {
                let label = e.tag.trim_start_matches("owlx:");
                match e.attr("owlx:class") {
                    Some(c) => Ok(format!("{label}({c})")),
                    None => nested(label),
                }
            }
            _ => Err(self.unsupported(e, index)),
        }
    }
}

fn subtree_size(e: &XmlTerm) -> usize {
    1 + e.elements().map(subtree_size).sum::<usize>()
}

fn is_atom_tag(tag: &str) -> bool {
    matches!(
        tag,
        "swrlx:classAtom"
            | "swrlx:individualPropertyAtom"
            | "swrlx:datavaluedPropertyAtom"
            | "swrlx:sameIndividualAtom"
            | "swrlx:differentIndividualsAtom"
            | "swrlx:builtinAtom"
    )
}

/// OWL declarations carry no rule content and are skipped.
fn is_declaration(tag: &str) -> bool {
    matches!(tag, "owlx:Class" | "owlx:ObjectProperty" | "owlx:DatatypeProperty" | "owlx:Individual")
}

pub fn parse_ruleml_xml(text: &str) -> Result<SwrlOntology, RulemlError> {
    let (root, positions) = xml::parse_located(text)?;
    Reader { positions }.ontology(&root)
}

fn object_xml(o: &SwrlObj) -> XmlTerm {
    match o {
        SwrlObj::Variable(v) => XmlTerm::new("ruleml:var").with_text(v.clone()),
        SwrlObj::Individual(i) => XmlTerm::new("owlx:Individual").with_attr("owlx:name", i.clone()),
        SwrlObj::Data(t) => {
            let text = match t {
                Term::Const(c) => c.clone(),
                other => other.canonical_text(),
            };
            XmlTerm::new("owlx:DataValue").with_text(text)
        }
    }
}

fn atom_xml(a: &SwrlAtom) -> XmlTerm {
    let with_objs = |mut e: XmlTerm, objs: &[&SwrlObj]| {
        for o in objs {
            e = e.with_child(object_xml(o));
        }
        e
    };
    match a {
        SwrlAtom::Class { class, arg } => XmlTerm::new("swrlx:classAtom")
            .with_child(XmlTerm::new("owlx:Class").with_attr("owlx:name", class.clone()))
            .with_child(object_xml(arg)),
        SwrlAtom::Property { property, arg1, arg2 } => with_objs(
            XmlTerm::new("swrlx:individualPropertyAtom").with_attr("swrlx:property", property.clone()),
            &[arg1, arg2],
        ),
        SwrlAtom::SameAs(x, y) => with_objs(XmlTerm::new("swrlx:sameIndividualAtom"), &[x, y]),
        SwrlAtom::DifferentFrom(x, y) => with_objs(XmlTerm::new("swrlx:differentIndividualsAtom"), &[x, y]),
        SwrlAtom::Builtin { name, args } => with_objs(
            XmlTerm::new("swrlx:builtinAtom").with_attr("swrlx:builtin", name.clone()),
            &args.iter().collect::<Vec<_>>(),
        ),
    }
}

pub fn ontology_to_xml(onto: &SwrlOntology) -> XmlTerm {
    let mut root = XmlTerm::new("swrlx:Ontology").with_attr("swrlx:name", onto.name.clone());
    for a in &onto.class_atoms {
        root = root.with_child(atom_xml(a));
    }
    for r in &onto.rules {
        let mut imp = XmlTerm::new("ruleml:imp");
        for a in &r.annotations {
            imp = imp.with_child(XmlTerm::new("ruleml:_rlab").with_text(a.clone()));
        }
        let mut body = XmlTerm::new("ruleml:_body");
        for a in &r.antecedent {
            body = body.with_child(atom_xml(a));
        }
        let mut head = XmlTerm::new("ruleml:_head");
        for a in &r.consequent {
            head = head.with_child(atom_xml(a));
        }
        imp.children.push(XmlNode::Element(body));
        imp.children.push(XmlNode::Element(head));
        root = root.with_child(imp);
    }
    root
}

/// Prints an ontology as XML that [`parse_ruleml_xml`] reads back.
pub fn print_ruleml_xml(onto: &SwrlOntology) -> String {
    xml::serialize(&ontology_to_xml(onto))
}
