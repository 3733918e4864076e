//! The fixed set of embedded builtin predicates.

use std::collections::BTreeSet;

use crate::kernel::{Atom, Number, PredKey, Substitute, Substitution, Term, BUILTIN_MODULE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuiltinError {
    #[error("instantiation error in {goal}")]
    Instantiation { goal: String },
    #[error("type error in {goal}: expected {expected}, found {found}")]
    Type { goal: String, expected: &'static str, found: String },
    #[error("evaluation error in {goal}: {message}")]
    Evaluation { goal: String, message: String },
    #[error("unknown builtin {0}")]
    Unknown(String),
}

const REGISTRY: &[(&str, usize)] = &[
    ("is", 2),
    ("<", 2),
    ("=<", 2),
    (">", 2),
    (">=", 2),
    ("=:=", 2),
    ("=\\=", 2),
    ("=", 2),
    ("\\=", 2),
    ("atom_number", 2),
    ("pt", 2),
    ("same_as", 2),
    ("different_from", 2),
    ("create_owl_thing", 4),
    ("append", 2),
    ("true", 0),
];

pub fn is_registered(name: &str, arity: usize) -> bool {
    REGISTRY.iter().any(|&(n, a)| n == name && a == arity)
}

/// Whether a body atom is evaluated as a builtin: explicitly `prolog:`
/// prefixed, or an unprefixed registered name the program does not define.
pub fn is_builtin_atom(atom: &Atom, idb: &BTreeSet<PredKey>) -> bool {
    match atom.module.as_deref() {
        Some(m) => m == BUILTIN_MODULE,
        None => is_registered(&atom.predicate, atom.arity()) && !idb.contains(&atom.key()),
    }
}

fn vars_of<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<String> {
    terms.into_iter().flat_map(|t| t.variable_set()).collect()
}

/// Variables a builtin needs bound before it can run.
pub fn input_vars(atom: &Atom) -> BTreeSet<String> {
    let a = &atom.args;
    match (atom.predicate.as_str(), a.len()) {
        ("is", 2) | ("pt", 2) => vars_of([&a[1]]),
        ("atom_number", 2) | ("append", 2) => vars_of([&a[0]]),
        ("create_owl_thing", 4) => vars_of(&a[1..]),
        _ => vars_of(a),
    }
}

/// Variables bound by a successful call.
pub fn output_vars(atom: &Atom) -> BTreeSet<String> {
    let a = &atom.args;
    match (atom.predicate.as_str(), a.len()) {
        ("is", 2) | ("pt", 2) | ("create_owl_thing", 4) => vars_of([&a[0]]),
        ("atom_number", 2) | ("append", 2) => vars_of([&a[1]]),
        ("=", 2) | ("same_as", 2) => vars_of(a),
        _ => BTreeSet::new(),
    }
}

/// Whether the builtin can run once `bound` holds. Unification builtins
/// only need one side bound.
pub fn is_ready(atom: &Atom, bound: &BTreeSet<String>) -> bool {
    match (atom.predicate.as_str(), atom.args.len()) {
        ("=", 2) | ("same_as", 2) => {
            vars_of([&atom.args[0]]).is_subset(bound) || vars_of([&atom.args[1]]).is_subset(bound)
        }
        _ => input_vars(atom).is_subset(bound),
    }
}

/// Evaluates an arithmetic expression.
pub fn eval_arith(t: &Term, goal: &str) -> Result<Number, BuiltinError> {
    let type_err = |found: &Term| BuiltinError::Type { goal: goal.to_string(), expected: "evaluable", found: found.to_string() };
    let eval_err = |message: &str| BuiltinError::Evaluation { goal: goal.to_string(), message: message.to_string() };
    match t {
        Term::Num(n) => Ok(*n),
        Term::Var(_) => Err(BuiltinError::Instantiation { goal: goal.to_string() }),
        Term::Compound(f, args) if args.len() == 1 => {
            let x = eval_arith(&args[0], goal)?;
            match (f.as_str(), x) {
                ("-", Number::Int(i)) => i.checked_neg().map(Number::Int).ok_or_else(|| eval_err("integer overflow")),
                ("-", Number::Float(v)) => Ok(Number::Float(-v)),
                ("+", x) => Ok(x),
                ("abs", Number::Int(i)) => i.checked_abs().map(Number::Int).ok_or_else(|| eval_err("integer overflow")),
                ("abs", Number::Float(v)) => Ok(Number::Float(v.abs())),
                _ => Err(type_err(t)),
            }
        }
        Term::Compound(f, args) if args.len() == 2 => {
            let x = eval_arith(&args[0], goal)?;
            let y = eval_arith(&args[1], goal)?;
            let overflow = || eval_err("integer overflow");
            match (f.as_str(), x, y) {
                ("+", Number::Int(a), Number::Int(b)) => a.checked_add(b).map(Number::Int).ok_or_else(overflow),
                ("-", Number::Int(a), Number::Int(b)) => a.checked_sub(b).map(Number::Int).ok_or_else(overflow),
                ("*", Number::Int(a), Number::Int(b)) => a.checked_mul(b).map(Number::Int).ok_or_else(overflow),
                ("/" | "//" | "mod", _, Number::Int(0)) => Err(eval_err("division by zero")),
                ("/", Number::Int(a), Number::Int(b)) if a % b == 0 => Ok(Number::Int(a / b)),
                ("//", Number::Int(a), Number::Int(b)) => a.checked_div(b).map(Number::Int).ok_or_else(overflow),
                ("mod", Number::Int(a), Number::Int(b)) => Ok(Number::Int(a.rem_euclid(b))),
                ("//" | "mod", _, _) => Err(type_err(t)),
                ("min", a, b) => Ok(if b.arith_cmp(a).is_lt() { b } else { a }),
                ("max", a, b) => Ok(if b.arith_cmp(a).is_gt() { b } else { a }),
                (op @ ("+" | "-" | "*" | "/"), a, b) => {
                    let (a, b) = (a.as_f64(), b.as_f64());
                    if op == "/" && b == 0.0 {
                        return Err(eval_err("division by zero"));
                    }
                    let v = match op {
                        "+" => a + b,
                        "-" => a - b,
                        "*" => a * b,
                        _ => a / b,
                    };
                    Ok(Number::Float(v))
                }
                _ => Err(type_err(t)),
            }
        }
        _ => Err(type_err(t)),
    }
}

/// Reads numeric text; anything that is not a plain decimal number fails.
pub fn parse_number(text: &str) -> Option<Number> {
    let s = text.trim();
    if let Ok(i) = s.parse::<i64>() {
        return Some(Number::Int(i));
    }
    let plain = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
        && s.chars().any(|c| c.is_ascii_digit());
    if plain {
        s.parse::<f64>().ok().filter(|f| f.is_finite()).map(Number::Float)
    } else {
        None
    }
}

fn unify_into(s: &Substitution, a: &Term, b: &Term) -> Vec<Substitution> {
    let mut s = s.clone();
    if s.unify(a, b) {
        vec![s]
    } else {
        vec![]
    }
}

fn ground_arg(t: &Term, goal: &str) -> Result<(), BuiltinError> {
    if t.is_ground() {
        Ok(())
    } else {
        Err(BuiltinError::Instantiation { goal: goal.to_string() })
    }
}

/// Runs a builtin goal under `s` and returns the answer substitutions
/// extending it (none or one for every builtin here).
pub fn call_builtin(goal: &Atom, s: &Substitution) -> Result<Vec<Substitution>, BuiltinError> {
    let g = goal.apply(s);
    let text = crate::syntax::print_atom(&g);
    let a = &g.args;
    match (g.predicate.as_str(), a.len()) {
        ("true", 0) => Ok(vec![s.clone()]),
        ("is", 2) => {
            let v = eval_arith(&a[1], &text)?;
            Ok(unify_into(s, &a[0], &Term::Num(v)))
        }
        (op @ ("<" | "=<" | ">" | ">=" | "=:=" | "=\\="), 2) => {
            let ord = eval_arith(&a[0], &text)?.arith_cmp(eval_arith(&a[1], &text)?);
            let holds = match op {
                "<" => ord.is_lt(),
                "=<" => ord.is_le(),
                ">" => ord.is_gt(),
                ">=" => ord.is_ge(),
                "=:=" => ord.is_eq(),
                _ => ord.is_ne(),
            };
            Ok(if holds { vec![s.clone()] } else { vec![] })
        }
        ("=" | "same_as" | "pt", 2) => Ok(unify_into(s, &a[0], &a[1])),
        ("\\=", 2) => {
            let mut probe = s.clone();
            Ok(if probe.unify(&a[0], &a[1]) { vec![] } else { vec![s.clone()] })
        }
        ("different_from", 2) => {
            ground_arg(&a[0], &text)?;
            ground_arg(&a[1], &text)?;
            Ok(if a[0] != a[1] { vec![s.clone()] } else { vec![] })
        }
        ("atom_number", 2) => match &a[0] {
            Term::Var(_) => Err(BuiltinError::Instantiation { goal: text }),
            Term::Const(c) => Ok(match parse_number(c) {
                Some(n) => unify_into(s, &a[1], &Term::Num(n)),
                None => vec![],
            }),
            Term::Num(n) => Ok(unify_into(s, &a[1], &Term::Num(*n))),
            other => Err(BuiltinError::Type { goal: text, expected: "atom", found: other.to_string() }),
        },
        ("create_owl_thing", 4) => {
            for t in &a[1..] {
                ground_arg(t, &text)?;
            }
            let mut args = vec![Term::constant("create_owl_thing")];
            args.extend(a[1..].iter().cloned());
            Ok(unify_into(s, &a[0], &Term::compound("skolem", args)))
        }
        ("append", 2) => {
            let outer = a[0].as_proper_list().ok_or_else(|| match &a[0] {
                t if !t.is_ground() => BuiltinError::Instantiation { goal: text.clone() },
                t => BuiltinError::Type { goal: text.clone(), expected: "list", found: t.to_string() },
            })?;
            let mut flat = Vec::new();
            for inner in outer {
                let items = inner.as_proper_list().ok_or_else(|| BuiltinError::Type {
                    goal: text.clone(),
                    expected: "list",
                    found: inner.to_string(),
                })?;
                flat.extend(items.into_iter().cloned());
            }
            Ok(unify_into(s, &a[1], &Term::list(flat)))
        }
        (name, arity) => Err(BuiltinError::Unknown(format!("{name}/{arity}"))),
    }
}
