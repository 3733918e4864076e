use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Functor of the canonical list cell.
pub const LIST_CONS: &str = ".";
/// The empty list.
pub const LIST_NIL: &str = "[]";

/// A numeric literal.
///
/// Integers are kept exactly; everything else is a 64-bit float. Term
/// equality is syntactic: `Int(15)` and `Float(15.0)` are different terms
/// even though they compare equal arithmetically (see [`Number::arith_cmp`]).
#[derive(Debug, Clone, Copy)]
pub enum Number {
    Int(i64),
    Float(f64),
}

impl Number {
    pub fn as_f64(self) -> f64 {
        match self {
            Number::Int(i) => i as f64,
            Number::Float(f) => f,
        }
    }

    pub fn is_int(self) -> bool {
        matches!(self, Number::Int(_))
    }

    /// Arithmetic comparison, under which `15` and `15.0` are equal.
    pub fn arith_cmp(self, other: Number) -> Ordering {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => a.cmp(&b),
            (a, b) => a.as_f64().total_cmp(&b.as_f64()),
        }
    }

    /// Text form without quoting, e.g. `22` or `10.0`. Used wherever a number
    /// is compared against untyped text such as an XML attribute.
    pub fn canonical_text(self) -> String {
        match self {
            Number::Int(i) => i.to_string(),
            Number::Float(f) => format_float(f),
        }
    }
}

/// Renders a float so that it reads back as a float (always has a `.` or
/// an exponent with a mantissa containing `.`).
pub fn format_float(f: f64) -> String {
    if f.is_nan() {
        return "nan".to_string();
    }
    if f.is_infinite() {
        return if f > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    let s = format!("{f:?}");
    if s.contains('.') {
        return s;
    }
    match s.find('e') {
        Some(pos) => format!("{}.0{}", &s[..pos], &s[pos..]),
        None => format!("{s}.0"),
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => a == b,
            (Number::Float(a), Number::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Number {}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Number::Int(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Number::Float(f) => {
                1u8.hash(state);
                f.to_bits().hash(state);
            }
        }
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        // Standard order of terms: by value; on a tie a float sorts first.
        self.arith_cmp(*other).then_with(|| match (self, other) {
            (Number::Float(_), Number::Int(_)) => Ordering::Less,
            (Number::Int(_), Number::Float(_)) => Ordering::Greater,
            (Number::Float(a), Number::Float(b)) => a.total_cmp(b),
            (Number::Int(_), Number::Int(_)) => Ordering::Equal,
        })
    }
}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// The universal value representation.
///
/// Lists have no variant of their own: `[a, b | T]` is stored in canonical
/// cons form `'.'(a, '.'(b, T))`, so both spellings are the same value.
/// Use [`Term::list`] and [`Term::as_list`] to build and inspect them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Num(Number),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::Const(symbol.into())
    }

    pub fn int(i: i64) -> Term {
        Term::Num(Number::Int(i))
    }

    pub fn float(f: f64) -> Term {
        Term::Num(Number::Float(f))
    }

    /// Builds a compound; zero arguments collapse to a constant.
    pub fn compound(functor: impl Into<String>, args: Vec<Term>) -> Term {
        let functor = functor.into();
        if args.is_empty() {
            Term::Const(functor)
        } else {
            Term::Compound(functor, args)
        }
    }

    pub fn nil() -> Term {
        Term::Const(LIST_NIL.to_string())
    }

    /// Builds the canonical form of `[elements | tail]`.
    pub fn list_with_tail(elements: Vec<Term>, tail: Term) -> Term {
        elements
            .into_iter()
            .rev()
            .fold(tail, |acc, e| Term::Compound(LIST_CONS.to_string(), vec![e, acc]))
    }

    pub fn list(elements: Vec<Term>) -> Term {
        Term::list_with_tail(elements, Term::nil())
    }

    /// Splits a list term into its elements and its tail. A proper list has
    /// tail `[]`. Non-list terms come back as `([], self)`.
    pub fn as_list(&self) -> (Vec<&Term>, &Term) {
        let mut elems = Vec::new();
        let mut cur = self;
        while let Term::Compound(f, args) = cur {
            if f != LIST_CONS || args.len() != 2 {
                break;
            }
            elems.push(&args[0]);
            cur = &args[1];
        }
        (elems, cur)
    }

    /// Elements of a proper list, or `None`.
    pub fn as_proper_list(&self) -> Option<Vec<&Term>> {
        let (elems, tail) = self.as_list();
        tail.is_nil().then_some(elems)
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Term::Const(c) if c == LIST_NIL)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_list_cell(&self) -> bool {
        matches!(self, Term::Compound(f, a) if f == LIST_CONS && a.len() == 2)
    }

    pub fn as_number(&self) -> Option<Number> {
        match self {
            Term::Num(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Name and arity of a callable term (constant or compound).
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Const(c) => Some((c, 0)),
            Term::Compound(f, args) => Some((f, args.len())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Num(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Const(_) | Term::Num(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    /// Variables in first-occurrence order, without duplicates.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|o| o == v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) | Term::Num(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn variable_set(&self) -> BTreeSet<String> {
        self.variables().into_iter().collect()
    }

    /// Text used when the term is compared against untyped text: constants
    /// by their symbol, numbers canonically, anything else in printed form.
    pub fn canonical_text(&self) -> String {
        match self {
            Term::Const(c) => c.clone(),
            Term::Num(n) => n.canonical_text(),
            other => crate::syntax::write_term(other),
        }
    }

    fn order_class(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Num(_) => 1,
            Term::Const(_) => 2,
            Term::Compound(..) => 3,
        }
    }
}

impl Ord for Term {
    /// Standard order of terms: Var < Number < Const < Compound; compounds
    /// by arity, then functor name, then arguments left to right.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Num(a), Term::Num(b)) => a.cmp(b),
            (Term::Const(a), Term::Const(b)) => a.cmp(b),
            (Term::Compound(fa, aa), Term::Compound(fb, ab)) => aa
                .len()
                .cmp(&ab.len())
                .then_with(|| fa.cmp(fb))
                .then_with(|| aa.cmp(ab)),
            _ => self.order_class().cmp(&other.order_class()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}
