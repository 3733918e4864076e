//! Bottom-up evaluation: builtins, safety, stratification, the fact store,
//! naive and semi-naive fixpoints and proof trees.

mod autopt;
mod builtins;
mod eval;
mod proof;
mod safety;
mod store;
mod strata;

pub use autopt::{auto_pt, carries_proof_trees};
pub use builtins::{call_builtin, eval_arith, is_builtin_atom, is_registered, parse_number, BuiltinError};
pub use eval::{evaluate, evaluate_into, tp_step, EvalOptions, Strategy, DEFAULT_MAX_FACTS, DEFAULT_MAX_ITERATIONS};
pub use proof::{
    explain_fact, find_proofs, print_tree_term, validate_proof, ProofError, ProofTree, RenderFormat, FACT_TAG,
};
pub use safety::{check_safety, literal_kind, LitKind, SafetyViolation, ViolationKind};
pub use store::FactStore;
pub use strata::{stratify, CycleError, Strata};

#[allow(unused_imports)]
pub(crate) use safety::{literal_plan_item, plan_order, Need, PlanItem};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("unsafe program: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Safety(Vec<SafetyViolation>),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("{location}: {source}")]
    Builtin { location: String, source: BuiltinError },
    #[error("{location}: derived non-ground head {atom}")]
    NonGroundHead { location: String, atom: String },
    #[error("resource limit exceeded in stratum {stratum}: {reason} after {iterations} iterations and {facts} facts; recent: {}", .sample.join(", "))]
    ResourceLimitExceeded { stratum: usize, reason: String, iterations: usize, facts: usize, sample: Vec<String> },
}
