use super::lexer::is_symbol_char;
use super::ops;
use crate::kernel::{format_float, Atom, Literal, Number, Program, Rule, Term, LIST_CONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Style {
    /// Re-readable output: atoms quoted where necessary.
    Quoted,
    /// Display output: no quotes at all.
    Plain,
}

/// Prints a term so that [`super::parse_term`] reads it back unchanged.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_into(t, 1200, Style::Quoted, &mut out);
    out
}

/// Prints a term without quoting atoms, for human-facing output.
pub fn write_term(t: &Term) -> String {
    let mut out = String::new();
    write_into(t, 1200, Style::Plain, &mut out);
    out
}

pub fn print_atom(a: &Atom) -> String {
    let mut out = String::new();
    write_into(&a.to_qualified_term(), 999, Style::Quoted, &mut out);
    out
}

pub fn print_literal(l: &Literal) -> String {
    let atom = print_atom(&l.atom);
    if l.is_negated() {
        format!("not({atom})")
    } else {
        atom
    }
}

/// Prints one clause, preceded by a `% name:` line when the rule's name is
/// not the automatic one for `position` (1-based).
pub fn print_rule_at(rule: &Rule, position: usize) -> String {
    let mut out = String::new();
    if rule.name != format!("r{position}") {
        out.push_str(&format!("% name: {}\n", rule.name));
    }
    out.push_str(&print_atom(&rule.head));
    if rule.body.is_empty() {
        out.push_str(".\n");
        return out;
    }
    out.push_str(" :-\n");
    for (i, lit) in rule.body.iter().enumerate() {
        out.push_str("    ");
        out.push_str(&print_literal(lit));
        out.push_str(if i + 1 == rule.body.len() { ".\n" } else { ",\n" });
    }
    out
}

pub fn print_rule(rule: &Rule) -> String {
    let mut out = String::new();
    out.push_str(&print_atom(&rule.head));
    if !rule.body.is_empty() {
        out.push_str(" :- ");
        let body: Vec<String> = rule.body.iter().map(print_literal).collect();
        out.push_str(&body.join(", "));
    }
    out.push('.');
    out
}

/// Prints a whole program; the empty program prints as `""`.
pub fn print_program(p: &Program) -> String {
    p.rules
        .iter()
        .enumerate()
        .map(|(i, r)| print_rule_at(r, i + 1))
        .collect::<Vec<_>>()
        .join("\n")
}

fn atom_needs_quotes(s: &str) -> bool {
    if matches!(s, "[]" | "!" | ";" | "{}") {
        return false;
    }
    let mut chars = s.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_lowercase() => !s.chars().all(|c| c.is_alphanumeric() || c == '_'),
        Some(c) if is_symbol_char(c) => !s.chars().all(is_symbol_char),
        Some(_) => true,
    }
}

fn quote_atom(s: &str) -> String {
    let mut out = String::from("'");
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

fn atom_text(s: &str, style: Style) -> String {
    if style == Style::Quoted && atom_needs_quotes(s) {
        quote_atom(s)
    } else {
        s.to_string()
    }
}

fn number_text(n: Number) -> String {
    match n {
        Number::Int(i) => i.to_string(),
        Number::Float(f) => format_float(f),
    }
}

/// Appends `piece`, inserting a space if the two would otherwise glue into
/// one token.
fn push_separated(out: &mut String, piece: &str) {
    if let (Some(last), Some(first)) = (out.chars().last(), piece.chars().next()) {
        let glue = (is_symbol_char(last) && is_symbol_char(first)) || (is_alnum(last) && is_alnum(first));
        if glue {
            out.push(' ');
        }
    }
    out.push_str(piece);
}

fn is_alnum(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn write_into(t: &Term, max: u16, style: Style, out: &mut String) {
    match t {
        Term::Var(v) => push_separated(out, v),
        Term::Num(n) => push_separated(out, &number_text(*n)),
        Term::Const(c) => {
            let text = atom_text(c, style);
            if ops::is_operator(c) && max < 999 {
                push_separated(out, &format!("({text})"));
            } else {
                push_separated(out, &text);
            }
        }
        Term::Compound(f, args) => write_compound(f, args, max, style, out),
    }
}

fn write_args(args: &[Term], style: Style, out: &mut String) {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let mut piece = String::new();
        write_into(a, 999, style, &mut piece);
        out.push_str(&piece);
    }
}

fn write_compound(f: &str, args: &[Term], max: u16, style: Style, out: &mut String) {
    if f == LIST_CONS && args.len() == 2 {
        let cell = Term::Compound(f.to_string(), args.to_vec());
        let (elems, tail) = cell.as_list();
        let elems: Vec<Term> = elems.into_iter().cloned().collect();
        let mut piece = String::from("[");
        write_args(&elems, style, &mut piece);
        if !tail.is_nil() {
            piece.push('|');
            let mut t = String::new();
            write_into(tail, 999, style, &mut t);
            piece.push_str(&t);
        }
        piece.push(']');
        push_separated(out, &piece);
        return;
    }
    if f == "{}" && args.len() == 1 {
        let mut piece = String::from("{");
        let mut inner = String::new();
        write_into(&args[0], 1200, style, &mut inner);
        piece.push_str(&inner);
        piece.push('}');
        push_separated(out, &piece);
        return;
    }
    if args.len() == 2 {
        if let Some(def) = ops::infix(f) {
            let (lmax, rmax) = def.operand_limits();
            let mut piece = String::new();
            write_into(&args[0], lmax, style, &mut piece);
            let op_text = if f == "," { ",".to_string() } else { atom_text(f, style) };
            if f == "," {
                piece.push_str(", ");
            } else if f.chars().all(is_alnum) || matches!(f, ":-" | "->" | ";") {
                piece.push(' ');
                piece.push_str(&op_text);
                piece.push(' ');
            } else {
                push_separated(&mut piece, &op_text);
            }
            let mut right = String::new();
            write_into(&args[1], rmax, style, &mut right);
            push_separated(&mut piece, right.trim_start());
            wrap(piece, def.priority, max, out);
            return;
        }
    }
    if args.len() == 1 {
        if let Some(def) = ops::prefix(f) {
            if f != "-" && f != "+" || args[0].as_number().is_none() {
                let (_, rmax) = def.operand_limits();
                let mut piece = atom_text(f, style);
                let mut operand = String::new();
                write_into(&args[0], rmax, style, &mut operand);
                let operand = operand.trim_start().to_string();
                if f.chars().all(is_alnum) || operand.starts_with('(') {
                    piece.push(' ');
                    piece.push_str(&operand);
                } else {
                    push_separated(&mut piece, &operand);
                }
                wrap(piece, def.priority, max, out);
                return;
            }
        }
    }
    let mut piece = atom_text(f, style);
    piece.push('(');
    write_args(args, style, &mut piece);
    piece.push(')');
    push_separated(out, &piece);
}

fn wrap(piece: String, priority: u16, max: u16, out: &mut String) {
    if priority > max {
        push_separated(out, &format!("({piece})"));
    } else {
        push_separated(out, &piece);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, parse_term};

    fn rt(s: &str) -> String {
        print_term(&parse_term(s).unwrap())
    }

    #[test]
    fn prints_operators() {
        assert_eq!(rt("L is N+M"), "L is N+M");
        assert_eq!(rt("295 is 15+280"), "295 is 15+280");
        assert_eq!(rt("a - (b - c)"), "a-(b-c)");
        assert_eq!(rt("(a - b) - c"), "a-b-c");
        assert_eq!(rt("1 - -1"), "1- -1");
        assert_eq!(rt("prolog:(L is N+M)"), "prolog:(L is N+M)");
        assert_eq!(rt("-(1)"), "-(1)");
        assert_eq!(rt("- a"), "-a");
        assert_eq!(rt("f((a, b))"), "f((a, b))");
        assert_eq!(rt("[@'ESSN'=SSN]"), "[@'ESSN'=SSN]");
    }

    #[test]
    fn quotes_where_needed() {
        assert_eq!(rt("'KT'"), "'KT'");
        assert_eq!(rt("kt"), "kt");
        assert_eq!(rt("'works_on.xml'"), "'works_on.xml'");
        assert_eq!(rt("'it''s'"), "'it\\'s'");
        assert_eq!(write_term(&parse_term("t('KT', 15)").unwrap()), "t(KT, 15)");
    }

    #[test]
    fn lists() {
        assert_eq!(rt("[a,b|T]"), "[a, b|T]");
        assert_eq!(rt("[]"), "[]");
        assert_eq!(rt("'.'(a, [])"), "[a]");
    }

    #[test]
    fn empty_program_prints_empty() {
        assert_eq!(print_program(&Program::default()), "");
    }

    #[test]
    fn negation_round_trip() {
        let p = parse_program("a(X) :- b(X), not c(X).").unwrap();
        let text = print_program(&p);
        assert!(text.contains("not(c(X))"), "{text}");
        assert_eq!(parse_program(&text).unwrap(), p);
    }

    #[test]
    fn explicit_names_survive_printing() {
        let p = parse_program("% name: base\np(a).\nq(b).").unwrap();
        let text = print_program(&p);
        assert_eq!(parse_program(&text).unwrap(), p);
    }
}
