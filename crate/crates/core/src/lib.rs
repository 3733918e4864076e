//! Deductive database toolkit: rule programs, dependency graphs, bottom-up
//! evaluation with proof trees, SWRL import and hybrid XML/CSV queries.

pub mod kernel;
pub mod syntax;
pub mod xml;
pub mod graphs;
pub mod engine;
pub mod hybrid;
