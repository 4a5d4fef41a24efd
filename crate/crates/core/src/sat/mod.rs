//! Quantified MAX-2-SAT and its reduction to the scoring game on trees and
//! caterpillars.

mod formula;
mod instance;
mod lci;
mod oracle;
mod transform;

use thiserror::Error;

pub use formula::{Clause, FormulaError, Literal, Qbf2Formula, Quantifier};
pub use instance::{
    build_caterpillar_instance, build_tree_instance, is_caterpillar, LeafBundle, LiteralVertex, Provenance,
    ReductionArtifact, Target, VariableOrigin,
};
pub use lci::{bound_occurrences, break_cycles, lci_graph, BoundedFormula, LciGraph};
pub use oracle::{max2sat_optimum, qbf_max_solve, QbfOutcome, DEFAULT_QBF_CAP};
pub use transform::{alternation_slot, duplicate, pad_alternation, renumber, Renumbered};

pub fn parse_formula(text: &str) -> Result<Qbf2Formula, FormulaError> {
    Qbf2Formula::parse(text)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("formula has no clauses")]
    NoClauses,
    #[error("clause {clause} uses the same variable twice")]
    SameVariableClause { clause: usize },
    #[error("clause {clause} occurs {count} times")]
    RepeatedClause { clause: usize, count: usize },
    #[error("literal-clause incidence graph has a cycle")]
    CyclicIncidenceGraph,
    #[error("formula must be purely existential")]
    NotExistential,
    #[error("variable {var} occurs {count} times (at most 3 allowed)")]
    TooManyOccurrences { var: u32, count: usize },
    #[error("literal {literal} occurs {count} times (at most 2 allowed)")]
    LiteralOccurrences { literal: i64, count: usize },
    #[error("{vars} variables exceed the cap of {cap}")]
    TooManyVariables { vars: usize, cap: usize },
    #[error("elimination needs a factor over {width} variables (cap {cap})")]
    TooWide { width: usize, cap: usize },
}
