use std::collections::HashSet;

use super::lexer::{Lexer, Tok, Token};
use super::ops;
use super::SyntaxError;
use crate::kernel::{Atom, Literal, Program, Rule, SourceSpan, Term};

/// Prefix given to the fresh variables that stand for `_`.
pub const ANON_PREFIX: &str = "_G";

pub(crate) struct TermParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    file: &'a str,
    anon: usize,
}

impl<'a> TermParser<'a> {
    pub fn new(tokens: &'a [Token], file: &'a str) -> Self {
        TermParser { tokens, pos: 0, file, anon: 0 }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn error_here(&self, message: impl Into<String>) -> SyntaxError {
        let (line, column) = match self.peek().or_else(|| self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        };
        SyntaxError::new(self.file, line, column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        match self.peek_tok() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error_here(format!("expected {what}, found {}", describe(t)))),
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    pub fn span_here(&self) -> SourceSpan {
        let (line, column) = self.peek().map(|t| (t.line, t.column)).unwrap_or((1, 1));
        SourceSpan { file: self.file.to_string(), line, column }
    }

    /// Can the current token begin a term?
    fn starts_term(&self) -> bool {
        match self.peek_tok() {
            None => false,
            Some(Tok::Name { text, quoted }) => *quoted || ops::infix(text).is_none() || ops::prefix(text).is_some(),
            Some(Tok::Close | Tok::CloseList | Tok::CloseCurly | Tok::Comma | Tok::Bar | Tok::End) => false,
            Some(Tok::NameDirective(_)) => false,
            Some(_) => true,
        }
    }

    pub fn parse(&mut self, max: u16) -> Result<Term, SyntaxError> {
        let (mut left, mut left_prec) = self.primary(max)?;
        loop {
            let name = match self.peek_tok() {
                Some(Tok::Name { text, quoted: false }) => text.clone(),
                Some(Tok::Comma) => ",".to_string(),
                Some(Tok::Bar) => ";".to_string(),
                _ => break,
            };
            let Some(def) = ops::infix(&name) else { break };
            let (lmax, rmax) = def.operand_limits();
            if def.priority > max || left_prec > lmax {
                break;
            }
            self.pos += 1;
            let right = self.parse(rmax)?;
            left = Term::Compound(name, vec![left, right]);
            left_prec = def.priority;
        }
        Ok(left)
    }

    fn primary(&mut self, max: u16) -> Result<(Term, u16), SyntaxError> {
        let Some(token) = self.next().cloned() else {
            return Err(self.error_here("unexpected end of input"));
        };
        let term = match token.tok {
            Tok::Int(i) => Term::int(i),
            Tok::Float(f) => Term::float(f),
            Tok::Str(s) => Term::Const(s),
            Tok::Var(v) => {
                if v == "_" {
                    self.anon += 1;
                    Term::Var(format!("{ANON_PREFIX}{}", self.anon))
                } else {
                    Term::Var(v)
                }
            }
            Tok::Open => {
                let t = self.parse(1200)?;
                self.expect(Tok::Close, "')'")?;
                t
            }
            Tok::OpenList => {
                if self.peek_tok() == Some(&Tok::CloseList) {
                    self.pos += 1;
                    return self.after_name("[]".to_string(), false, max);
                }
                let mut elems = vec![self.parse(999)?];
                while self.peek_tok() == Some(&Tok::Comma) {
                    self.pos += 1;
                    elems.push(self.parse(999)?);
                }
                let tail = if self.peek_tok() == Some(&Tok::Bar) {
                    self.pos += 1;
                    self.parse(999)?
                } else {
                    Term::nil()
                };
                self.expect(Tok::CloseList, "']'")?;
                Term::list_with_tail(elems, tail)
            }
            Tok::OpenCurly => {
                if self.peek_tok() == Some(&Tok::CloseCurly) {
                    self.pos += 1;
                    return self.after_name("{}".to_string(), false, max);
                }
                let t = self.parse(1200)?;
                self.expect(Tok::CloseCurly, "'}'")?;
                Term::Compound("{}".into(), vec![t])
            }
            Tok::Name { text, quoted } => return self.after_name(text, quoted, max),
            other => {
                self.pos -= 1;
                return Err(self.error_here(format!("unexpected {}", describe(&other))));
            }
        };
        Ok((term, 0))
    }

    fn after_name(&mut self, name: String, quoted: bool, max: u16) -> Result<(Term, u16), SyntaxError> {
        // Functional notation: name immediately followed by '('.
        if let Some(next) = self.peek() {
            if next.tok == Tok::Open && !next.layout_before {
                self.pos += 1;
                let mut args = vec![self.parse(999)?];
                while self.peek_tok() == Some(&Tok::Comma) {
                    self.pos += 1;
                    args.push(self.parse(999)?);
                }
                self.expect(Tok::Close, "')'")?;
                return Ok((Term::Compound(name, args), 0));
            }
        }
        if quoted {
            return Ok((Term::Const(name), 0));
        }
        // Negative numeric literal.
        if name == "-" {
            if let Some(next) = self.peek() {
                if !next.layout_before {
                    match next.tok {
                        Tok::Int(i) => {
                            self.pos += 1;
                            return Ok((Term::int(-i), 0));
                        }
                        Tok::Float(f) => {
                            self.pos += 1;
                            return Ok((Term::float(-f), 0));
                        }
                        _ => {}
                    }
                }
            }
        }
        if let Some(def) = ops::prefix(&name) {
            if self.starts_term() {
                let (priority, arg_max) = if def.priority > max {
                    (999.min(max), 999.min(max))
                } else {
                    (def.priority, def.operand_limits().1)
                };
                let arg = self.parse(arg_max)?;
                return Ok((Term::Compound(name, vec![arg]), priority));
            }
        }
        Ok((Term::Const(name), 0))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name { text, .. } => format!("'{text}'"),
        Tok::Var(v) => format!("variable {v}"),
        Tok::Int(i) => i.to_string(),
        Tok::Float(f) => f.to_string(),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::OpenList => "'['".into(),
        Tok::CloseList => "']'".into(),
        Tok::OpenCurly => "'{'".into(),
        Tok::CloseCurly => "'}'".into(),
        Tok::Comma => "','".into(),
        Tok::Bar => "'|'".into(),
        Tok::End => "end of clause".into(),
        Tok::NameDirective(_) => "name directive".into(),
    }
}

/// Splits a conjunction `(A, B, C)` into its conjuncts.
pub fn conjuncts(term: &Term) -> Vec<&Term> {
    let mut out = Vec::new();
    let mut cur = term;
    loop {
        match cur {
            Term::Compound(f, args) if f == "," && args.len() == 2 => {
                out.extend(conjuncts(&args[0]));
                cur = &args[1];
            }
            Term::Const(c) if c == "true" && out.is_empty() => return out,
            _ => {
                out.push(cur);
                return out;
            }
        }
    }
}

/// Converts a body goal term to a literal: `not(G)`, `not G`, `\+ G` give a
/// default-negated literal; `M:G` sets the module prefix.
pub fn literal_from_term(term: &Term) -> Result<Literal, String> {
    match term {
        Term::Compound(f, args) if (f == "not" || f == "\\+") && args.len() == 1 => {
            let inner = literal_from_term(&args[0])?;
            if inner.is_negated() {
                return Err(format!("nested negation in {}", super::print_term(term)));
            }
            Ok(Literal::negated(inner.atom))
        }
        Term::Compound(f, args) if f == ":=" && args.len() == 2 => {
            Err("path bindings (V := Expr) are only allowed in query goals".to_string())
        }
        _ => atom_from_term(term).map(Literal::positive),
    }
}

/// Converts a callable term to an atom.
pub fn atom_from_term(term: &Term) -> Result<Atom, String> {
    match term {
        Term::Var(v) => Err(format!("variable {v} used as a goal")),
        Term::Num(n) => Err(format!("number {n} used as a goal")),
        Term::Compound(f, args) if f == ":" && args.len() == 2 => {
            let module = args[0]
                .as_const()
                .ok_or_else(|| format!("module qualifier must be an atom in {}", super::print_term(term)))?;
            let mut atom = atom_from_term(&args[1])?;
            atom.module = Some(module.to_string());
            Ok(atom)
        }
        _ => Atom::from_term(term).ok_or_else(|| format!("not callable: {}", super::print_term(term))),
    }
}

/// Expands `prolog:(A, B)` into `prolog:A, prolog:B`.
pub(crate) fn body_goals(term: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for goal in conjuncts(term) {
        match goal {
            Term::Compound(f, args) if f == ":" && args.len() == 2 && matches!(&args[1], Term::Compound(g, a) if g == "," && a.len() == 2) => {
                for inner in conjuncts(&args[1]) {
                    out.push(Term::Compound(":".into(), vec![args[0].clone(), inner.clone()]));
                }
            }
            other => out.push(other.clone()),
        }
    }
    out
}

pub(crate) fn tokenize(text: &str, file: &str) -> Result<Vec<Token>, SyntaxError> {
    Lexer::new(text, file).tokenize()
}

/// Parses a single term (no trailing `.` required).
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut tokens = tokenize(text, "")?;
    tokens.retain(|t| !matches!(t.tok, Tok::NameDirective(_)));
    if matches!(tokens.last().map(|t| &t.tok), Some(Tok::End)) {
        tokens.pop();
    }
    let mut p = TermParser::new(&tokens, "");
    let term = p.parse(1200)?;
    if !p.at_end() {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(term)
}

/// Parses rule text in the extended Datalog syntax.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    parse_program_file(text, "")
}

/// Like [`parse_program`], recording `file` in every source span.
pub fn parse_program_file(text: &str, file: &str) -> Result<Program, SyntaxError> {
    let tokens = tokenize(text, file)?;
    let mut rules: Vec<Rule> = Vec::new();
    let mut explicit: HashSet<String> = HashSet::new();
    let mut pending_name: Option<(String, usize, usize)> = None;
    let mut start = 0;
    let mut clause_index = 0;
    while start < tokens.len() {
        if let Tok::NameDirective(name) = &tokens[start].tok {
            pending_name = Some((name.clone(), tokens[start].line, tokens[start].column));
            start += 1;
            continue;
        }
        let Some(rel_end) = tokens[start..].iter().position(|t| t.tok == Tok::End) else {
            let t = &tokens[start];
            return Err(SyntaxError::new(file, t.line, t.column, "clause is not terminated by '.'"));
        };
        let clause_tokens: Vec<Token> = tokens[start..start + rel_end]
            .iter()
            .filter(|t| !matches!(t.tok, Tok::NameDirective(_)))
            .cloned()
            .collect();
        let end_token = &tokens[start + rel_end];
        start += rel_end + 1;
        if clause_tokens.is_empty() {
            return Err(SyntaxError::new(file, end_token.line, end_token.column, "empty clause"));
        }
        clause_index += 1;
        let mut rule = parse_clause(&clause_tokens, file)?;
        rule.name = match pending_name.take() {
            Some((name, line, column)) => {
                if !explicit.insert(name.clone()) {
                    return Err(SyntaxError::new(file, line, column, format!("duplicate rule name {name}")));
                }
                name
            }
            None => format!("r{clause_index}"),
        };
        rules.push(rule);
    }
    let mut seen = HashSet::new();
    for rule in &rules {
        if !seen.insert(rule.name.clone()) {
            let span = rule.span.clone().unwrap_or_default();
            return Err(SyntaxError::new(file, span.line, span.column, format!("duplicate rule name {}", rule.name)));
        }
    }
    Ok(Program::new(rules))
}

fn parse_clause(tokens: &[Token], file: &str) -> Result<Rule, SyntaxError> {
    let mut p = TermParser::new(tokens, file);
    let span = p.span_here();
    let term = p.parse(1200)?;
    if !p.at_end() {
        return Err(p.error_here("operator expected"));
    }
    let err = |message: String| SyntaxError::new(file, span.line, span.column, message);
    let (head_term, body_term) = match &term {
        Term::Compound(f, args) if f == ":-" && args.len() == 2 => (&args[0], Some(&args[1])),
        Term::Compound(f, args) if f == ":-" && args.len() == 1 => {
            return Err(err("directives are not supported".into()))
        }
        _ => (&term, None),
    };
    let head = match literal_from_term(head_term).map_err(err)? {
        lit if lit.is_negated() => return Err(SyntaxError::new(file, span.line, span.column, "negated rule head")),
        lit => lit.atom,
    };
    let mut body = Vec::new();
    if let Some(b) = body_term {
        for goal in body_goals(b) {
            let mut lit = literal_from_term(&goal).map_err(|m| SyntaxError::new(file, span.line, span.column, m))?;
            lit.span = Some(span.clone());
            body.push(lit);
        }
    }
    let mut rule = Rule::new(String::new(), head, body);
    rule.span = Some(span);
    Ok(rule)
}
