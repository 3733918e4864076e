//! SWRL rules: the abstract syntax (`Implies(Antecedent(...) Consequent(...))`),
//! splitting of conjunctive consequents, and translation to Datalog rules.

use std::collections::BTreeMap;
use std::fmt;

use super::SyntaxError;
use crate::kernel::{Atom, Literal, Program, Rule, Term};

/// Argument of a SWRL atom.
#[derive(Debug, Clone, PartialEq)]
pub enum SwrlObj {
    /// `I-variable(x)` or `D-variable(x)`; the name as written.
    Variable(String),
    Individual(String),
    /// A data literal; numbers become `Num`, everything else `Const`.
    Data(Term),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SwrlAtom {
    Class { class: String, arg: SwrlObj },
    Property { property: String, arg1: SwrlObj, arg2: SwrlObj },
    SameAs(SwrlObj, SwrlObj),
    DifferentFrom(SwrlObj, SwrlObj),
    Builtin { name: String, args: Vec<SwrlObj> },
}

impl SwrlAtom {
    pub fn objects(&self) -> Vec<&SwrlObj> {
        match self {
            SwrlAtom::Class { arg, .. } => vec![arg],
            SwrlAtom::Property { arg1, arg2, .. }
            | SwrlAtom::SameAs(arg1, arg2)
            | SwrlAtom::DifferentFrom(arg1, arg2) => vec![arg1, arg2],
            SwrlAtom::Builtin { args, .. } => args.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SwrlRule {
    pub annotations: Vec<String>,
    pub antecedent: Vec<SwrlAtom>,
    pub consequent: Vec<SwrlAtom>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwrlOntology {
    pub name: String,
    pub rules: Vec<SwrlRule>,
    /// Top-level atom assertions outside any rule.
    pub class_atoms: Vec<SwrlAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SwrlError {
    #[error("rule {rule} has an empty consequent")]
    EmptyConsequent { rule: usize },
    #[error("rule {rule}: variables {first} and {second} collide after capitalization")]
    VariableCollision { rule: usize, first: String, second: String },
    #[error("rule {rule}: variable name {name:?} is not usable")]
    BadVariable { rule: usize, name: String },
}

impl fmt::Display for SwrlObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwrlObj::Variable(v) => write!(f, "?{v}"),
            SwrlObj::Individual(i) => f.write_str(i),
            SwrlObj::Data(t) => write!(f, "{t}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Abstract syntax reader

#[derive(Debug, Clone, PartialEq)]
enum STok {
    Word(String),
    Str(String),
    Open,
    Close,
}

struct SwrlReader {
    toks: Vec<(STok, usize, usize)>,
    pos: usize,
}

fn lex_swrl(text: &str) -> Result<Vec<(STok, usize, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            advance(c, &mut line, &mut col);
            i += 1;
        } else if c == '(' || c == ')' {
            out.push((if c == '(' { STok::Open } else { STok::Close }, l0, c0));
            advance(c, &mut line, &mut col);
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            advance(c, &mut line, &mut col);
            i += 1;
            loop {
                let Some(&d) = chars.get(i) else {
                    return Err(SyntaxError::new("", l0, c0, "unterminated string literal"));
                };
                advance(d, &mut line, &mut col);
                i += 1;
                if d == '"' {
                    break;
                }
                if d == '\\' {
                    if let Some(&e) = chars.get(i) {
                        advance(e, &mut line, &mut col);
                        i += 1;
                        s.push(e);
                        continue;
                    }
                }
                s.push(d);
            }
            // Typed literal suffix "..."^^xsd:int is read and dropped.
            if chars.get(i) == Some(&'^') && chars.get(i + 1) == Some(&'^') {
                while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '(' && chars[i] != ')' {
                    advance(chars[i], &mut line, &mut col);
                    i += 1;
                }
            }
            out.push((STok::Str(s), l0, c0));
        } else {
            let mut s = String::new();
            while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '(' | ')' | '"') {
                s.push(chars[i]);
                advance(chars[i], &mut line, &mut col);
                i += 1;
            }
            out.push((STok::Word(s), l0, c0));
        }
    }
    Ok(out)
}

impl SwrlReader {
    fn peek(&self) -> Option<&STok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| (t.1, t.2))
            .unwrap_or((1, 1));
        SyntaxError::new("", line, column, message)
    }

    fn word(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(STok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn expect(&mut self, t: STok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    /// `name(` — consumes both and returns the name.
    fn head(&mut self) -> Result<String, SyntaxError> {
        let w = self.word()?;
        self.expect(STok::Open, "'('")?;
        Ok(w)
    }

    /// Raw text of a balanced parenthesized group whose '(' was consumed.
    fn opaque_group(&mut self) -> Result<String, SyntaxError> {
        let mut depth = 1;
        let mut parts = Vec::new();
        loop {
            let tok = self.toks.get(self.pos).map(|t| t.0.clone());
            self.pos += 1;
            match tok {
                None => return Err(self.error("unbalanced parentheses")),
                Some(STok::Open) => {
                    depth += 1;
                    parts.push("(".to_string());
                }
                Some(STok::Close) => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(parts.join(" ").replace("( ", "(").replace(" )", ")"));
                    }
                    parts.push(")".to_string());
                }
                Some(STok::Word(w)) => parts.push(w),
                Some(STok::Str(s)) => parts.push(format!("\"{s}\"")),
            }
        }
    }

    fn rule(&mut self) -> Result<SwrlRule, SyntaxError> {
        let kw = self.head()?;
        if kw != "Implies" {
            return Err(self.error(format!("expected Implies(, found {kw}(")));
        }
        let mut rule = SwrlRule::default();
        let mut seen_antecedent = false;
        let mut seen_consequent = false;
        loop {
            match self.peek() {
                Some(STok::Close) => {
                    self.pos += 1;
                    break;
                }
                Some(STok::Word(_)) => {
                    let at = self.pos;
                    let w = self.head()?;
                    match w.as_str() {
                        "Antecedent" if !seen_antecedent && !seen_consequent => {
                            rule.antecedent = self.atoms()?;
                            seen_antecedent = true;
                        }
                        "Consequent" if !seen_consequent => {
                            rule.consequent = self.atoms()?;
                            seen_consequent = true;
                        }
                        _ if !seen_antecedent && !seen_consequent => {
                            let body = self.opaque_group()?;
                            rule.annotations.push(format!("{w}({body})"));
                        }
                        _ => {
                            self.pos = at;
                            return Err(self.error(format!("unexpected {w}( inside Implies")));
                        }
                    }
                }
                Some(STok::Str(s)) if !seen_antecedent => {
                    rule.annotations.push(s.clone());
                    self.pos += 1;
                }
                _ => return Err(self.error("malformed Implies")),
            }
        }
        Ok(rule)
    }

    fn atoms(&mut self) -> Result<Vec<SwrlAtom>, SyntaxError> {
        let mut out = Vec::new();
        while self.peek() != Some(&STok::Close) {
            out.push(self.atom()?);
        }
        self.pos += 1;
        Ok(out)
    }

    fn atom(&mut self) -> Result<SwrlAtom, SyntaxError> {
        let start = self.pos;
        let name = self.head()?;
        let mut builtin_name = None;
        if name == "builtin" {
            builtin_name = Some(self.word()?);
        }
        let mut args = Vec::new();
        while self.peek() != Some(&STok::Close) {
            args.push(self.object()?);
        }
        self.pos += 1;
        if let Some(b) = builtin_name {
            return Ok(SwrlAtom::Builtin { name: b, args });
        }
        let local = name.rsplit([':', '#']).next().unwrap_or(&name);
        let mut two = |args: Vec<SwrlObj>| -> Result<(SwrlObj, SwrlObj), SyntaxError> {
            let mut it = args.into_iter();
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => Ok((a, b)),
                _ => {
                    self.pos = start;
                    Err(self.error(format!("{name} takes two arguments")))
                }
            }
        };
        match local {
            "sameAs" | "same_as" | "SameIndividualAtom" | "sameIndividual" => {
                let (a, b) = two(args)?;
                return Ok(SwrlAtom::SameAs(a, b));
            }
            "differentFrom" | "different_from" | "DifferentIndividualsAtom" | "differentIndividuals" => {
                let (a, b) = two(args)?;
                return Ok(SwrlAtom::DifferentFrom(a, b));
            }
            _ => {}
        }
        if name.contains(':') && !name.contains("://") && is_builtin_prefix(&name) {
            return Ok(SwrlAtom::Builtin { name, args });
        }
        match args.len() {
            1 => Ok(SwrlAtom::Class { class: name, arg: args.pop().unwrap() }),
            2 => {
                let arg2 = args.pop().unwrap();
                let arg1 = args.pop().unwrap();
                Ok(SwrlAtom::Property { property: name, arg1, arg2 })
            }
            n => {
                self.pos = start;
                Err(self.error(format!("unknown atom form {name} with {n} arguments")))
            }
        }
    }

    fn object(&mut self) -> Result<SwrlObj, SyntaxError> {
        match self.peek().cloned() {
            Some(STok::Str(s)) => {
                self.pos += 1;
                Ok(SwrlObj::Data(data_literal(&s)))
            }
            Some(STok::Word(w)) => {
                if self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&STok::Open) {
                    self.pos += 2;
                    let inner = match self.peek().cloned() {
                        Some(STok::Word(x)) | Some(STok::Str(x)) => x,
                        _ => return Err(self.error("expected a name")),
                    };
                    self.pos += 1;
                    self.expect(STok::Close, "')'")?;
                    return match w.as_str() {
                        "I-variable" | "D-variable" | "Variable" => Ok(SwrlObj::Variable(inner)),
                        "Individual" => Ok(SwrlObj::Individual(inner)),
                        "DataValue" | "Literal" => Ok(SwrlObj::Data(data_literal(&inner))),
                        other => Err(self.error(format!("unknown object form {other}("))),
                    };
                }
                self.pos += 1;
                if let Some(v) = w.strip_prefix('?') {
                    return Ok(SwrlObj::Variable(v.to_string()));
                }
                if w.parse::<f64>().is_ok() {
                    return Ok(SwrlObj::Data(data_literal(&w)));
                }
                Ok(SwrlObj::Individual(w))
            }
            _ => Err(self.error("expected an atom argument")),
        }
    }
}

fn is_builtin_prefix(name: &str) -> bool {
    matches!(name.split(':').next(), Some("swrlx" | "swrlb"))
}

/// Data literal text to a term: integers and decimals become numbers.
pub fn data_literal(s: &str) -> Term {
    if let Ok(i) = s.parse::<i64>() {
        return Term::int(i);
    }
    if s.contains(['.', 'e', 'E']) && !s.contains(char::is_alphabetic) || s.contains(['.']) && s.parse::<f64>().is_ok() {
        if let Ok(f) = s.parse::<f64>() {
            return Term::float(f);
        }
    }
    Term::constant(s)
}

/// Parses SWRL rules in the abstract syntax. Whitespace is insignificant;
/// any number of `Implies(...)` may follow each other, optionally wrapped in
/// `Ontology(...)`.
pub fn parse_swrl(text: &str) -> Result<Vec<SwrlRule>, SyntaxError> {
    let mut r = SwrlReader { toks: lex_swrl(text)?, pos: 0 };
    let mut rules = Vec::new();
    let mut wrapper_depth = 0;
    while let Some(tok) = r.peek().cloned() {
        match tok {
            STok::Word(w) if w == "Ontology" => {
                r.head()?;
                wrapper_depth += 1;
                if let Some(STok::Word(name)) = r.peek() {
                    if r.toks.get(r.pos + 1).map(|t| &t.0) != Some(&STok::Open) {
                        let _ = name;
                        r.pos += 1;
                    }
                }
            }
            STok::Close if wrapper_depth > 0 => {
                r.pos += 1;
                wrapper_depth -= 1;
            }
            STok::Word(_) => rules.push(r.rule()?),
            _ => return Err(r.error("expected Implies(")),
        }
    }
    if wrapper_depth > 0 {
        return Err(r.error("unbalanced Ontology("));
    }
    Ok(rules)
}

// ---------------------------------------------------------------------------
// Normalization and translation

/// Splits a rule with n consequent atoms into n single-consequent rules that
/// share the full antecedent.
pub fn lloyd_topor(rule: &SwrlRule) -> Result<Vec<SwrlRule>, SwrlError> {
    if rule.consequent.is_empty() {
        return Err(SwrlError::EmptyConsequent { rule: 0 });
    }
    Ok(rule
        .consequent
        .iter()
        .map(|c| SwrlRule {
            annotations: rule.annotations.clone(),
            antecedent: rule.antecedent.clone(),
            consequent: vec![c.clone()],
        })
        .collect())
}

/// Applies [`lloyd_topor`] to every rule, numbering errors by rule position.
pub fn normalize_rules(rules: &[SwrlRule]) -> Result<Vec<SwrlRule>, SwrlError> {
    let mut out = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        out.extend(lloyd_topor(r).map_err(|_| SwrlError::EmptyConsequent { rule: i + 1 })?);
    }
    Ok(out)
}

fn capitalize(v: &str) -> Option<String> {
    let mut chars = v.chars();
    let first = chars.next()?;
    if !(first.is_alphabetic() || first == '_') {
        return None;
    }
    if !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return None;
    }
    Some(first.to_uppercase().chain(chars).collect())
}

fn local_name(name: &str) -> &str {
    name.rsplit([':', '#']).next().unwrap_or(name)
}

/// Translates normalized rules into a Datalog program. Rules are named
/// `r1, r2, ...` in order.
pub fn swrl_to_datalog(rules: &[SwrlRule]) -> Result<Program, SwrlError> {
    let mut out = Vec::new();
    for (i, rule) in rules.iter().enumerate() {
        let index = i + 1;
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        for atom in rule.antecedent.iter().chain(&rule.consequent) {
            for obj in atom.objects() {
                if let SwrlObj::Variable(v) = obj {
                    let cap = capitalize(v).ok_or_else(|| SwrlError::BadVariable { rule: index, name: v.clone() })?;
                    if let Some((other, _)) = names.iter().find(|(orig, c)| **c == cap && *orig != v) {
                        return Err(SwrlError::VariableCollision { rule: index, first: other.clone(), second: v.clone() });
                    }
                    names.insert(v.clone(), cap);
                }
            }
        }
        let term = |o: &SwrlObj| match o {
            SwrlObj::Variable(v) => Term::Var(names[v].clone()),
            SwrlObj::Individual(i) => Term::constant(i.clone()),
            SwrlObj::Data(t) => t.clone(),
        };
        let convert = |a: &SwrlAtom| -> Atom {
            match a {
                SwrlAtom::Class { class, arg } => Atom::new(class.clone(), vec![term(arg)]),
                SwrlAtom::Property { property, arg1, arg2 } => {
                    Atom::new(property.clone(), vec![term(arg1), term(arg2)])
                }
                SwrlAtom::SameAs(a, b) => Atom::builtin("same_as", vec![term(a), term(b)]),
                SwrlAtom::DifferentFrom(a, b) => Atom::builtin("different_from", vec![term(a), term(b)]),
                SwrlAtom::Builtin { name, args } => {
                    Atom::builtin(local_name(name), args.iter().map(term).collect())
                }
            }
        };
        let [head] = rule.consequent.as_slice() else {
            return Err(SwrlError::EmptyConsequent { rule: index });
        };
        let body = rule.antecedent.iter().map(|a| Literal::positive(convert(a))).collect();
        out.push(Rule::new(format!("r{index}"), convert(head), body));
    }
    Ok(Program::new(out))
}

// ---------------------------------------------------------------------------
// Printing

fn print_obj(o: &SwrlObj) -> String {
    match o {
        SwrlObj::Variable(v) => format!("I-variable({v})"),
        SwrlObj::Individual(i) => i.clone(),
        SwrlObj::Data(Term::Num(n)) => format!("\"{n}\""),
        SwrlObj::Data(t) => format!("\"{}\"", t.canonical_text().replace('"', "\\\"")),
    }
}

fn print_swrl_atom(a: &SwrlAtom) -> String {
    let objs = |os: &[&SwrlObj]| os.iter().map(|o| print_obj(o)).collect::<Vec<_>>().join(" ");
    match a {
        SwrlAtom::Class { class, arg } => format!("{class}({})", print_obj(arg)),
        SwrlAtom::Property { property, arg1, arg2 } => format!("{property}({})", objs(&[arg1, arg2])),
        SwrlAtom::SameAs(x, y) => format!("sameAs({})", objs(&[x, y])),
        SwrlAtom::DifferentFrom(x, y) => format!("differentFrom({})", objs(&[x, y])),
        SwrlAtom::Builtin { name, args } => {
            let args: Vec<&SwrlObj> = args.iter().collect();
            format!("builtin({name} {})", objs(&args)).replace(" )", ")")
        }
    }
}

/// Prints a rule in the abstract syntax.
pub fn print_swrl(rule: &SwrlRule) -> String {
    let atoms = |xs: &[SwrlAtom]| xs.iter().map(print_swrl_atom).collect::<Vec<_>>().join(" ");
    let mut out = String::from("Implies(");
    for a in &rule.annotations {
        out.push_str(a);
        out.push(' ');
    }
    out.push_str(&format!("Antecedent({}) Consequent({}))", atoms(&rule.antecedent), atoms(&rule.consequent)));
    out
}
