//! Readers and printers for rule text, SWRL abstract syntax and RuleML XML.

mod lexer;
mod ops;
mod parser;
mod printer;
pub mod ruleml;
pub mod swrl;

pub use parser::{atom_from_term, conjuncts, literal_from_term, parse_program, parse_program_file, parse_term, ANON_PREFIX};
pub use printer::{print_atom, print_literal, print_program, print_rule, print_rule_at, print_term, write_term};
pub(crate) use parser::body_goals;
pub use ruleml::{ontology_to_xml, parse_ruleml_xml, print_ruleml_xml, RulemlError};
pub use swrl::{
    lloyd_topor, normalize_rules, parse_swrl, print_swrl, swrl_to_datalog, SwrlAtom, SwrlError, SwrlObj, SwrlOntology,
    SwrlRule,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{line}:{column}: {message}", if file.is_empty() { String::new() } else { format!("{file}:") })]
pub struct SyntaxError {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(file: impl Into<String>, line: usize, column: usize, message: impl Into<String>) -> Self {
        SyntaxError { file: file.into(), line, column, message: message.into() }
    }
}
