//! Hybrid queries: XML documents addressed by path expressions, CSV files as
//! relations, and grouped aggregation over conjunctive goals.

mod aggregate;
mod csvload;
mod goal;
mod path;

use std::path::{Path, PathBuf};

pub use aggregate::{
    ddbase_aggregate, format_tuples, parse_template, tuples_to_json, AggColumn, AggFn, AggTemplate,
};
pub use csvload::{load_facts_csv, parse_facts_csv, CsvHeader};
pub use goal::{parse_goal, solve_goal, GoalItem};
pub use path::{path_eval, PathExpr, PathRoot, PathValue, Step};

use crate::engine::{BuiltinError, EngineError};
use crate::syntax::SyntaxError;
use crate::xml::{XmlSyntaxError, XmlTerm};

#[derive(Debug, thiserror::Error)]
pub enum HybridError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Xml { path: PathBuf, source: XmlSyntaxError },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("bad path expression {0}")]
    BadPath(String),
    #[error("unknown document {0}")]
    UnknownDocument(String),
    #[error("filter variable {var} is unbound")]
    UnboundFilterVariable { var: String },
    #[error("attribute access on a text value")]
    AttrAccessOnText,
    #[error("path source {0} is not an XML element")]
    NotAnElement(String),
    #[error(transparent)]
    Builtin(#[from] BuiltinError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("row {row}, column {column}: {cell:?} is not a number")]
    NumericParseError { row: usize, column: usize, cell: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("bad aggregation template: {0}")]
    BadTemplate(String),
    #[error("{func} over non-numeric value {value}")]
    NonNumericAggregate { func: String, value: String },
    #[error("template variable {var} is not bound by the goal")]
    TemplateVarUnbound { var: String },
}

pub fn load_xml(path: impl AsRef<Path>) -> Result<XmlTerm, HybridError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| HybridError::Io { path: path.to_path_buf(), source })?;
    crate::xml::parse(&text).map_err(|source| HybridError::Xml { path: path.to_path_buf(), source })
}

/// Documents available to `doc(Name)` in goals. Names not registered
/// explicitly are read as files relative to `base`.
#[derive(Debug, Clone, Default)]
pub struct Documents {
    docs: std::collections::BTreeMap<String, XmlTerm>,
    base: Option<PathBuf>,
}

impl Documents {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_base(base: impl Into<PathBuf>) -> Self {
        Documents { docs: Default::default(), base: Some(base.into()) }
    }

    pub fn insert(&mut self, name: impl Into<String>, doc: XmlTerm) {
        self.docs.insert(name.into(), doc);
    }

    pub fn get(&self, name: &str) -> Result<std::borrow::Cow<'_, XmlTerm>, HybridError> {
        if let Some(d) = self.docs.get(name) {
            return Ok(std::borrow::Cow::Borrowed(d));
        }
        match &self.base {
            Some(base) => load_xml(base.join(name)).map(std::borrow::Cow::Owned),
            None => Err(HybridError::UnknownDocument(name.to_string())),
        }
    }
}
