//! Term algebra: terms, atoms, literals, rules, substitutions and
//! unification with occurs check.

mod clause;
mod subst;
mod term;

pub use clause::{Atom, Literal, Polarity, PredKey, Program, Rule, SourceSpan, BUILTIN_MODULE};
pub use subst::{apply, mgu, mgu_atoms, rename_apart, Substitute, Substitution};
pub use term::{format_float, Number, Term, LIST_CONS, LIST_NIL};
