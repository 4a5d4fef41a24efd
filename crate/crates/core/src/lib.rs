//! Maker-Breaker scoring happy vertex game: exact solvers, closed forms and
//! the quantified MAX-2-SAT reduction.

pub mod closed_form;
pub mod fpt;
pub mod generators;
pub mod graph;
pub mod milnor;
pub mod partition;
pub mod position;
pub mod sat;
pub mod solver;
pub mod verify;

pub use graph::{Graph, GraphBuilder, GraphError};
pub use position::{Player, Position};
pub use solver::{solve, solve_pair, ScorePair, SolveConfig, SolveError};
