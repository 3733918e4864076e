//! A small XML reader and writer.
//!
//! Supported: elements, attributes, character data, comments, the
//! `<?xml ...?>` declaration and the five predefined entity references.
//! Prefixed names such as `swrlx:classAtom` are opaque strings; there is no
//! namespace resolution and no DTD support. Whitespace-only text between
//! elements is dropped.

use std::fmt;

use thiserror::Error;

use crate::kernel::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("XML syntax error at {line}:{column}: {message}")]
pub struct XmlSyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(XmlTerm),
    Text(String),
}

/// An element: tag, attributes in document order, children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlTerm {
    pub tag: String,
    pub attributes: Vec<(String, String)>,
    pub children: Vec<XmlNode>,
}

impl XmlTerm {
    pub fn new(tag: impl Into<String>) -> Self {
        XmlTerm { tag: tag.into(), attributes: Vec::new(), children: Vec::new() }
    }

    pub fn with_attr(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.push((key.into(), value.into()));
        self
    }

    pub fn with_child(mut self, child: XmlTerm) -> Self {
        self.children.push(XmlNode::Element(child));
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.children.push(XmlNode::Text(text.into()));
        self
    }

    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attributes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn elements(&self) -> impl Iterator<Item = &XmlTerm> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            XmlNode::Text(_) => None,
        })
    }

    /// Concatenated direct text content.
    pub fn text(&self) -> String {
        self.children
            .iter()
            .filter_map(|c| match c {
                XmlNode::Text(t) => Some(t.as_str()),
                XmlNode::Element(_) => None,
            })
            .collect()
    }

    /// Term form `element(Tag, [Name=Value, ...], Children)`, text children
    /// as constants.
    pub fn to_term(&self) -> Term {
        let attrs = self
            .attributes
            .iter()
            .map(|(k, v)| Term::compound("=", vec![Term::constant(k.clone()), Term::constant(v.clone())]))
            .collect();
        let children = self
            .children
            .iter()
            .map(|c| match c {
                XmlNode::Element(e) => e.to_term(),
                XmlNode::Text(t) => Term::constant(t.clone()),
            })
            .collect();
        Term::compound(
            "element",
            vec![Term::constant(self.tag.clone()), Term::list(attrs), Term::list(children)],
        )
    }

    /// Inverse of [`XmlTerm::to_term`].
    pub fn from_term(term: &Term) -> Option<XmlTerm> {
        let Term::Compound(f, args) = term else { return None };
        if f != "element" || args.len() != 3 {
            return None;
        }
        let tag = args[0].as_const()?.to_string();
        let mut attributes = Vec::new();
        for a in args[1].as_proper_list()? {
            let Term::Compound(eq, kv) = a else { return None };
            if eq != "=" || kv.len() != 2 {
                return None;
            }
            attributes.push((kv[0].as_const()?.to_string(), kv[1].canonical_text()));
        }
        let mut children = Vec::new();
        for c in args[2].as_proper_list()? {
            match c {
                Term::Const(t) => children.push(XmlNode::Text(t.clone())),
                other => children.push(XmlNode::Element(XmlTerm::from_term(other)?)),
            }
        }
        Some(XmlTerm { tag, attributes, children })
    }
}

impl fmt::Display for XmlTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

fn escape(s: &str, out: &mut String, in_attr: bool) {
    for c in s.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '"' if in_attr => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
}

/// Compact serialization; [`parse`] reads it back to an equal tree.
pub fn serialize(e: &XmlTerm) -> String {
    let mut out = String::new();
    write_element(e, &mut out);
    out
}

fn write_element(e: &XmlTerm, out: &mut String) {
    out.push('<');
    out.push_str(&e.tag);
    for (k, v) in &e.attributes {
        out.push(' ');
        out.push_str(k);
        out.push_str("=\"");
        escape(v, out, true);
        out.push('"');
    }
    if e.children.is_empty() {
        out.push_str("/>");
        return;
    }
    out.push('>');
    for c in &e.children {
        match c {
            XmlNode::Element(child) => write_element(child, out),
            XmlNode::Text(t) => escape(t, out, false),
        }
    }
    out.push_str("</");
    out.push_str(&e.tag);
    out.push('>');
}

/// Parses a document with exactly one root element.
pub fn parse(text: &str) -> Result<XmlTerm, XmlSyntaxError> {
    parse_located(text).map(|(root, _)| root)
}

/// Like [`parse`], also returning the `(line, column)` of every element's
/// `<` in document pre-order.
pub fn parse_located(text: &str) -> Result<(XmlTerm, Vec<(usize, usize)>), XmlSyntaxError> {
    let mut p = XmlParser { chars: text.chars().collect(), pos: 0, line: 1, column: 1, starts: Vec::new() };
    p.skip_misc()?;
    if p.peek() != Some('<') {
        return Err(p.error("expected root element"));
    }
    let root = p.element()?;
    p.skip_misc()?;
    if p.peek().is_some() {
        return Err(p.error("content after the root element"));
    }
    Ok((root, p.starts))
}

struct XmlParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    starts: Vec<(usize, usize)>,
}

impl XmlParser {
    fn error(&self, message: impl Into<String>) -> XmlSyntaxError {
        XmlSyntaxError { line: self.line, column: self.column, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.chars.get(self.pos + i) == Some(&c))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, s: &str) -> Result<(), XmlSyntaxError> {
        if self.starts_with(s) {
            for _ in s.chars() {
                self.bump();
            }
            Ok(())
        } else {
            Err(self.error(format!("expected {s:?}")))
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    /// Skips whitespace, comments and processing instructions.
    fn skip_misc(&mut self) -> Result<(), XmlSyntaxError> {
        loop {
            self.skip_ws();
            if self.starts_with("<!--") {
                self.comment()?;
            } else if self.starts_with("<?") {
                while !self.starts_with("?>") {
                    if self.bump().is_none() {
                        return Err(self.error("unterminated processing instruction"));
                    }
                }
                self.eat("?>")?;
            } else if self.starts_with("<!") {
                return Err(self.error("DTD and CDATA sections are not supported"));
            } else {
                return Ok(());
            }
        }
    }

    fn comment(&mut self) -> Result<(), XmlSyntaxError> {
        self.eat("<!--")?;
        while !self.starts_with("-->") {
            if self.bump().is_none() {
                return Err(self.error("unterminated comment"));
            }
        }
        self.eat("-->")
    }

    fn name(&mut self) -> Result<String, XmlSyntaxError> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | ':' | '-' | '.') {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(self.error("expected a name"));
        }
        Ok(s)
    }

    fn entity(&mut self) -> Result<char, XmlSyntaxError> {
        self.eat("&")?;
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ';' {
                break;
            }
            if name.len() > 8 {
                return Err(self.error("unterminated entity reference"));
            }
            name.push(c);
            self.bump();
        }
        self.eat(";")?;
        match name.as_str() {
            "lt" => Ok('<'),
            "gt" => Ok('>'),
            "amp" => Ok('&'),
            "quot" => Ok('"'),
            "apos" => Ok('\''),
            other => Err(self.error(format!("unsupported entity &{other};"))),
        }
    }

    fn element(&mut self) -> Result<XmlTerm, XmlSyntaxError> {
        self.starts.push((self.line, self.column));
        self.eat("<")?;
        let tag = self.name()?;
        let mut e = XmlTerm::new(tag);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('/') => {
                    self.eat("/>")?;
                    return Ok(e);
                }
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    let key = self.name()?;
                    self.skip_ws();
                    self.eat("=")?;
                    self.skip_ws();
                    let quote = match self.peek() {
                        Some(q @ ('"' | '\'')) => q,
                        _ => return Err(self.error("expected a quoted attribute value")),
                    };
                    self.bump();
                    let mut value = String::new();
                    loop {
                        match self.peek() {
                            None => return Err(self.error("unterminated attribute value")),
                            Some(c) if c == quote => {
                                self.bump();
                                break;
                            }
                            Some('&') => value.push(self.entity()?),
                            Some('<') => return Err(self.error("'<' in attribute value")),
                            Some(c) => {
                                value.push(c);
                                self.bump();
                            }
                        }
                    }
                    if e.attr(&key).is_some() {
                        return Err(self.error(format!("duplicate attribute {key}")));
                    }
                    e.attributes.push((key, value));
                }
                None => return Err(self.error("unterminated start tag")),
            }
        }
        let mut text = String::new();
        loop {
            if self.starts_with("</") {
                flush_text(&mut text, &mut e);
                self.eat("</")?;
                let close = self.name()?;
                if close != e.tag {
                    return Err(self.error(format!("mismatched end tag </{close}> for <{}>", e.tag)));
                }
                self.skip_ws();
                self.eat(">")?;
                return Ok(e);
            } else if self.starts_with("<!--") {
                self.comment()?;
            } else if self.starts_with("<!") || self.starts_with("<?") {
                return Err(self.error("CDATA sections and processing instructions are not supported here"));
            } else if self.starts_with("<") {
                flush_text(&mut text, &mut e);
                let child = self.element()?;
                e.children.push(XmlNode::Element(child));
            } else {
                match self.peek() {
                    None => return Err(self.error(format!("missing end tag for <{}>", e.tag))),
                    Some('&') => text.push(self.entity()?),
                    Some(c) => {
                        text.push(c);
                        self.bump();
                    }
                }
            }
        }
    }
}

fn flush_text(text: &mut String, e: &mut XmlTerm) {
    if !text.trim().is_empty() {
        e.children.push(XmlNode::Text(std::mem::take(text)));
    }
    text.clear();
}
